#include "icais/cli.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "icais/csv.hpp"
#include "icais/error.hpp"
#include "icais/procsim.hpp"
#include "json.hpp"

namespace icais::cli {

using json = nlohmann::ordered_json;

namespace {

std::string format_bits(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json result_json(const MeasureResult& r) {
  json j;
  j["schema"] = kSchema;
  j["measure"] = to_string(r.measure);
  j["k"] = r.k;
  j["average_bits"] = r.average_bits;
  j["n_transitions"] = r.n_transitions;
  j["source"] = to_string(r.source);
  if (r.local) {
    j["local_start_index"] = r.local->start_index;
    j["local"] = r.local->values;
  }
  return j;
}

void write_csv_row(std::ostream& out, const MeasureResult& r) {
  out << to_string(r.measure) << ',' << r.k << ',' << format_bits(r.average_bits)
      << ',' << r.n_transitions << ',' << to_string(r.source) << '\n';
}

SymbolSeries load_series(const CsvTable& table, const std::string& name) {
  const auto& values = table.column(name);
  if (values.empty()) throw DataError("column '" + name + "' has no rows");
  return SymbolSeries::from_values(values);
}

}  // namespace

std::vector<Measure> RunConfig::measures() const {
  if (measure == "all") return {Measure::ais, Measure::icais, Measure::interaction};
  return {parse_measure(measure)};
}

void RunConfig::validate() const {
  if (format != "json" && format != "csv")
    throw UsageError("--format must be json or csv, got '" + format + "'");
  if (input_lag < 0) throw UsageError("--lag must be >= 0");
  switch (command) {
    case Command::generate:
      if (process.empty()) throw UsageError("generate needs --process");
      if (n < 1) throw UsageError("--n must be >= 1");
      return;
    case Command::oracle:
      if (process.empty() || unit.empty())
        throw UsageError("oracle needs --process and --unit");
      if (k < 1) throw UsageError("-k must be >= 1");
      if (!(tol > 0.0)) throw UsageError("--tol must be > 0");
      if (max_iterations < 1) throw UsageError("--max-iterations must be >= 1");
      (void)measures();
      return;
    case Command::analyze:
    case Command::sweep:
      break;
  }
  if (data_path.empty()) throw UsageError("--data is required");
  if (command == Command::analyze && k < 1) throw UsageError("-k must be >= 1");
  if (command == Command::sweep && (k_min < 1 || k_max < k_min))
    throw UsageError("k range must satisfy 1 <= --k-min <= --k-max");
  if (emit_local && format != "json")
    throw UsageError("--local is only available with json output");
  if (!input_cols.empty() && !input_col.empty())
    throw UsageError("use either --input-col or --input-cols, not both");
  if (!input_cols.empty() && input_cols.size() != cols.size())
    throw UsageError("--input-cols must name one input per --cols entry");
  for (Measure m : measures())
    if (needs_input(m) && input_col.empty() && input_cols.empty())
      throw UsageError("measure '" + std::string(to_string(m)) +
                       "' conditions on the input: pass --input-col naming the "
                       "input column");
}

void cmd_generate(const RunConfig& config, std::ostream& out) {
  config.validate();
  ProcessSpec proc = parse_process_spec(config.process);
  if (config.seed) proc.seed = *config.seed;
  std::optional<UnitSpec> unit;
  if (!config.unit.empty()) unit = parse_unit_spec(config.unit);

  const SymbolSeries input = generate_input(proc, config.n);
  std::optional<SymbolSeries> output;
  if (unit) output = simulate_unit(*unit, input);

  auto write = [&](std::ostream& os) {
    os << (unit ? "input,output\n" : "output\n");
    for (std::size_t i = 0; i < input.length(); ++i) {
      if (unit)
        os << input[i] << ',' << (*output)[i] << '\n';
      else
        os << input[i] << '\n';
    }
  };

  if (config.out_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + config.out_path + "'");
  write(file);
  if (!file) throw DataError("failed writing '" + config.out_path + "'");

  json meta;
  meta["schema"] = kSchema;
  meta["process"] = to_string(proc);
  meta["unit"] = unit ? json(to_string(*unit)) : json(nullptr);
  meta["seed"] = proc.seed;
  meta["n"] = config.n;
  meta["rng"] = "xoshiro256** seeded by splitmix64";
  const std::string meta_path = config.out_path + ".meta.json";
  std::ofstream meta_file(meta_path, std::ios::binary);
  if (!meta_file) throw DataError("cannot write '" + meta_path + "'");
  meta_file << meta.dump(2) << '\n';
}

void cmd_analyze(const RunConfig& config, std::ostream& out) {
  config.validate();
  const CsvTable table = read_csv_file(config.data_path);
  const auto measures = config.measures();
  const EmbeddingConfig emb{config.k, config.input_lag, 0};
  const bool csv = config.format == "csv";
  if (csv) out << "measure,k,average_bits,n_transitions,source\n";

  if (config.cols.empty()) {
    const SymbolSeries x = load_series(table, config.col);
    std::optional<SymbolSeries> u;
    if (!config.input_col.empty()) u = load_series(table, config.input_col);
    const JointCountTable counts = count_joint(x, u, emb);
    for (Measure m : measures) {
      const MeasureResult r = evaluate(m, counts, config.emit_local);
      if (csv)
        write_csv_row(out, r);
      else
        out << result_json(r).dump() << '\n';
    }
    return;
  }

  // Ensemble over several homogeneous processes.
  std::vector<JointCountTable> tables;
  std::optional<SymbolSeries> shared;
  if (!config.input_col.empty()) shared = load_series(table, config.input_col);
  for (std::size_t i = 0; i < config.cols.size(); ++i) {
    const SymbolSeries x = load_series(table, config.cols[i]);
    std::optional<SymbolSeries> u = shared;
    if (!config.input_cols.empty()) u = load_series(table, config.input_cols[i]);
    tables.push_back(count_joint(x, u, emb));
  }
  for (Measure m : measures) {
    std::vector<LocalProfile> profiles;
    json per_process = json::array();
    for (std::size_t i = 0; i < tables.size(); ++i) {
      profiles.push_back(local_profile(m, tables[i]));
      per_process.push_back(
          {{"column", config.cols[i]},
           {"average_bits", average(m, plugin_distribution(tables[i]))}});
    }
    MeasureResult r = ensemble_average(profiles);
    if (csv) {
      write_csv_row(out, r);
      continue;
    }
    json j = result_json(r);
    j["processes"] = config.cols;
    j["input_mode"] = config.input_cols.empty()
                          ? (shared ? "shared" : "none")
                          : "per_process";
    j["per_process"] = per_process;
    if (config.emit_local) {
      json locals = json::array();
      for (const auto& p : profiles) locals.push_back(p.values);
      j["local_start_index"] = profiles.front().start_index;
      j["local"] = locals;
    }
    out << j.dump() << '\n';
  }
}

void cmd_sweep(const RunConfig& config, std::ostream& out) {
  config.validate();
  if (!config.cols.empty())
    throw UsageError("sweep analyzes a single column; use --col");
  const CsvTable table = read_csv_file(config.data_path);
  const SymbolSeries x = load_series(table, config.col);
  std::optional<SymbolSeries> u;
  if (!config.input_col.empty()) u = load_series(table, config.input_col);
  const auto measures = config.measures();
  SweepOptions opts;
  opts.input_lag = config.input_lag;
  const auto results =
      sweep_k(x, u ? &*u : nullptr, config.k_min, config.k_max, measures, opts);

  out << "measure,k,average_bits,n_transitions\n";
  for (Measure m : measures)
    for (const auto& r : results)
      if (r.measure == m)
        out << to_string(r.measure) << ',' << r.k << ','
            << format_bits(r.average_bits) << ',' << r.n_transitions << '\n';
}

void cmd_oracle(const RunConfig& config, std::ostream& out) {
  config.validate();
  const ProcessSpec proc = parse_process_spec(config.process);
  const UnitSpec unit = parse_unit_spec(config.unit);
  const MarkovChainModel model = build_joint_chain(proc, unit, config.k);
  StationaryOptions sopts;
  sopts.tol = config.tol;
  sopts.max_iterations = config.max_iterations;
  const Distribution joint = exact_joint(model, sopts, config.input_lag);
  const bool csv = config.format == "csv";
  if (csv) out << "measure,k,average_bits,n_transitions,source\n";
  for (Measure m : config.measures()) {
    const MeasureResult r = evaluate(m, joint, config.k, Source::oracle);
    if (csv) {
      write_csv_row(out, r);
      continue;
    }
    json j = result_json(r);
    j["process"] = to_string(proc);
    j["unit"] = to_string(unit);
    out << j.dump() << '\n';
  }
}

namespace {

void report(std::ostream& err, const char* kind, int code,
            const std::string& message) {
  json j;
  j["schema"] = kSchema;
  j["error"] = {{"kind", kind}, {"exit_code", code}, {"message", message}};
  err << j.dump() << '\n';
}

void add_common_analysis_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--data", c.data_path, "CSV file with a header row")
      ->required();
  sub->add_option("--col", c.col, "Process column")->capture_default_str();
  sub->add_option("--input-col", c.input_col, "Input column conditioned on");
  sub->add_option("--measure", c.measure, "ais, icais, interaction or all")
      ->capture_default_str();
  sub->add_option("--lag", c.input_lag,
                  "Input lag L: transition x_n -> x_{n+1} is paired with "
                  "u_{n+1-L}")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  RunConfig c;
  CLI::App app{"Active information storage for input-driven processes"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Simulate an input process and unit");
  gen->add_option("--process", c.process, "bernoulli:p=<float> | markov:p_stay=<float>")
      ->required();
  gen->add_option("--unit", c.unit, "forwarding | xor[:init=<0|1>]");
  gen->add_option("--n", c.n, "Number of samples")->required();
  gen->add_option("--seed", c.seed, "PRNG seed");
  gen->add_option("--out", c.out_path, "Output CSV (stdout if omitted)");

  auto* ana = app.add_subcommand("analyze", "Estimate measures from a CSV file");
  add_common_analysis_flags(ana, c);
  ana->add_option("-k", c.k, "History length")->capture_default_str();
  ana->add_option("--cols", c.cols, "Process columns for an ensemble average")
      ->delimiter(',');
  ana->add_option("--input-cols", c.input_cols,
                  "Per-process input columns, one per --cols entry")
      ->delimiter(',');
  ana->add_flag("--local", c.emit_local, "Include local values");
  ana->add_option("--format", c.format, "json or csv")->capture_default_str();

  auto* swp = app.add_subcommand("sweep", "Measures over a range of k");
  add_common_analysis_flags(swp, c);
  swp->add_option("--k-min", c.k_min, "Smallest k")->capture_default_str();
  swp->add_option("--k-max", c.k_max, "Largest k")->required();

  auto* orc = app.add_subcommand("oracle", "Exact stationary values");
  orc->add_option("--process", c.process, "Input process spec")->required();
  orc->add_option("--unit", c.unit, "Unit spec")->required();
  orc->add_option("--measure", c.measure, "ais, icais, interaction or all")
      ->capture_default_str();
  orc->add_option("-k", c.k, "History length")->capture_default_str();
  orc->add_option("--lag", c.input_lag, "Input lag (0 or 1)")
      ->capture_default_str();
  orc->add_option("--tol", c.tol, "Power-iteration L1 tolerance")
      ->capture_default_str();
  orc->add_option("--max-iterations", c.max_iterations, "Power-iteration cap")
      ->capture_default_str();
  orc->add_option("--format", c.format, "json or csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", 1, e.what());
    return 1;
  }

  try {
    if (gen->parsed()) {
      c.command = RunConfig::Command::generate;
      cmd_generate(c, out);
    } else if (ana->parsed()) {
      c.command = RunConfig::Command::analyze;
      cmd_analyze(c, out);
    } else if (swp->parsed()) {
      c.command = RunConfig::Command::sweep;
      cmd_sweep(c, out);
    } else {
      c.command = RunConfig::Command::oracle;
      cmd_oracle(c, out);
    }
  } catch (const Error& e) {
    const int code = static_cast<int>(e.category());
    const char* kind = e.category() == Error::Category::usage  ? "usage"
                       : e.category() == Error::Category::data ? "data"
                                                               : "numerical";
    report(err, kind, code, e.what());
    return code;
  } catch (const std::exception& e) {
    report(err, "data", 2, e.what());
    return 2;
  }
  return 0;
}

}  // namespace icais::cli
