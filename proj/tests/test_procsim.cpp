#include <gtest/gtest.h>

#include "icais/error.hpp"
#include "icais/procsim.hpp"
#include "icais/rng.hpp"
#include "test_support.hpp"

using namespace icais;

TEST(Rng, PinnedReferenceOutputs) {
  // reference values from an independent implementation of
  // splitmix64-seeded xoshiro256**
  Rng r0(0);
  EXPECT_EQ(r0.next(), 0x99ec5f36cb75f2b4ULL);
  EXPECT_EQ(r0.next(), 0xbf6e1f784956452aULL);
  EXPECT_EQ(r0.next(), 0x1a5f849d4933e6e0ULL);
  Rng r7(7);
  EXPECT_EQ(r7.next(), 0xb358faf74ef9765aULL);
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < 1000; ++i) ASSERT_LT(r.below(3), 3u);
}

TEST(GenerateInput, BernoulliOneIsAllOnes) {
  const auto s = generate_input(ProcessSpec::bernoulli(1.0, 3), 5);
  EXPECT_EQ(s.data(), (std::vector<Symbol>(5, 1)));
  EXPECT_EQ(generate_input(ProcessSpec::bernoulli(0.0, 3), 4).data(),
            (std::vector<Symbol>(4, 0)));
}

TEST(GenerateInput, PinnedSequenceForSeed7) {
  const auto s = generate_input(ProcessSpec::bernoulli(0.5, 7), 8);
  EXPECT_EQ(s.data(), (std::vector<Symbol>{0, 1, 0, 0, 0, 0, 1, 1}));
}

TEST(GenerateInput, RejectsInvalidSpecs) {
  EXPECT_THROW(generate_input(ProcessSpec::markov(1.0), 10), UsageError);
  EXPECT_THROW(generate_input(ProcessSpec::markov(0.0), 10), UsageError);
  EXPECT_THROW(generate_input(ProcessSpec::bernoulli(1.5), 10), UsageError);
  EXPECT_THROW(generate_input(ProcessSpec::bernoulli(0.5), 0), UsageError);
}

TEST(GenerateInput, MarkovRepeatFrequency) {
  const std::size_t n = 1'000'000;
  const auto s = generate_input(ProcessSpec::markov(0.7, 2024), n);
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < n; ++i) repeats += s[i] == s[i - 1];
  EXPECT_NEAR(static_cast<double>(repeats) / (n - 1), 0.7, 0.003);
}

TEST(GenerateInput, DeterministicPerSeed) {
  const auto a = generate_input(ProcessSpec::markov(0.7, 5), 1000);
  const auto b = generate_input(ProcessSpec::markov(0.7, 5), 1000);
  const auto c = generate_input(ProcessSpec::markov(0.7, 6), 1000);
  EXPECT_EQ(a.data(), b.data());
  EXPECT_NE(a.data(), c.data());
}

TEST(SimulateUnit, Examples) {
  const SymbolSeries in(Alphabet(2), {0, 1, 1});
  EXPECT_EQ(simulate_unit(UnitSpec::forwarding(), in).data(), in.data());
  const SymbolSeries ones(Alphabet(2), {1, 1, 1});
  EXPECT_EQ(simulate_unit(UnitSpec::xor_memory(0), ones).data(),
            (std::vector<Symbol>{1, 0, 1}));
  const SymbolSeries zeros(Alphabet(2), std::vector<Symbol>(6, 0));
  EXPECT_EQ(simulate_unit(UnitSpec::xor_memory(0), zeros).data(), zeros.data());
  EXPECT_EQ(simulate_unit(UnitSpec::xor_memory(1), zeros).data(),
            std::vector<Symbol>(6, 1));
}

TEST(SimulateUnit, RejectsNonBinaryInput) {
  const SymbolSeries in(Alphabet(3), {0, 2, 1});
  EXPECT_THROW(simulate_unit(UnitSpec::xor_memory(), in), DataError);
  EXPECT_THROW(UnitSpec::xor_memory(2).validate(), UsageError);
}

TEST(SimulateUnit, XorOutputRecoversInput) {
  for (Symbol init : {0u, 1u}) {
    const auto u = generate_input(ProcessSpec::bernoulli(0.4, 9 + init), 5000);
    const auto x = simulate_unit(UnitSpec::xor_memory(init), u);
    Symbol prev = init;
    for (std::size_t n = 0; n < u.length(); ++n) {
      ASSERT_EQ(x[n] ^ prev, u[n]);
      prev = x[n];
    }
  }
}

TEST(Transducer, ValidatesTablesAndDetectsOutputTracking) {
  EXPECT_THROW(Transducer(2, 2, 2, {0, 1, 1}, {0, 1, 1, 0}, 0), UsageError);
  EXPECT_THROW(Transducer(2, 2, 2, {0, 1, 2, 0}, {0, 1, 1, 0}, 0), UsageError);
  EXPECT_THROW(Transducer(2, 2, 2, {0, 1, 1, 0}, {0, 1, 1, 0}, 2), UsageError);
  EXPECT_TRUE(make_transducer(UnitSpec::xor_memory()).state_tracks_output());
  EXPECT_FALSE(make_transducer(UnitSpec::forwarding()).state_tracks_output());
}

TEST(SpecStrings, ParseAndPrint) {
  const auto p = parse_process_spec("bernoulli:p=0.5");
  EXPECT_EQ(p.kind, ProcessSpec::Kind::bernoulli);
  EXPECT_EQ(p.p, 0.5);
  const auto m = parse_process_spec("markov:p_stay=0.7,seed=12");
  EXPECT_EQ(m.kind, ProcessSpec::Kind::markov_binary);
  EXPECT_EQ(m.p, 0.7);
  EXPECT_EQ(m.seed, 12u);
  EXPECT_EQ(to_string(m), "markov:p_stay=0.7");
  EXPECT_EQ(parse_unit_spec("forwarding").kind, UnitSpec::Kind::forwarding);
  EXPECT_EQ(parse_unit_spec("xor").initial_state, 0u);
  EXPECT_EQ(parse_unit_spec("xor:init=1").initial_state, 1u);
  EXPECT_EQ(to_string(parse_unit_spec("xor:init=1")), "xor:init=1");
  EXPECT_EQ(to_string(parse_process_spec(to_string(p))), "bernoulli:p=0.5");
}

TEST(SpecStrings, Errors) {
  for (const char* bad : {"", "gauss:p=1", "bernoulli", "bernoulli:p=x",
                          "bernoulli:p=2", "markov:p_stay=1", "markov:p=0.5",
                          "bernoulli:p=0.5,p=0.4", "bernoulli:p"})
    EXPECT_THROW(parse_process_spec(bad), UsageError) << bad;
  for (const char* bad : {"xor:init=2", "forwarding:x=1", "and", "xor:init"})
    EXPECT_THROW(parse_unit_spec(bad), UsageError) << bad;
}

TEST(InputLaw, RowsAreStochastic) {
  for (auto spec : {ProcessSpec::bernoulli(0.3), ProcessSpec::markov(0.7)}) {
    const auto law = input_law(spec);
    for (Symbol u = 0; u < 2; ++u)
      EXPECT_NEAR(law.prob(u, 0) + law.prob(u, 1), 1.0, 1e-15);
  }
}
