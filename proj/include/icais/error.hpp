#pragma once

#include <stdexcept>
#include <string>

namespace icais {

/// Base class for all library errors. The category maps onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum class Category { usage = 1, data = 2, numerical = 3 };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

/// Invalid arguments, malformed specs, contradictory options.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(Category::usage, what) {}
};

/// Problems with the data: wrong lengths, bad symbols, unparsable cells.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Category::data, what) {}
};

/// Numerical failure, e.g. power iteration that does not converge.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(Category::numerical, what) {}
};

}  // namespace icais
