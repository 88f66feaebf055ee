#pragma once

// Minimal CSV dialect: comma separator, one header row, integer cells, no
// quoting, LF line endings.

#include <iosfwd>
#include <string>
#include <vector>

namespace icais {

class CsvTable {
 public:
  CsvTable(std::vector<std::string> header,
           std::vector<std::vector<long long>> columns);

  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t rows() const noexcept {
    return columns_.empty() ? 0 : columns_.front().size();
  }
  bool has_column(const std::string& name) const;
  /// Throws DataError naming the missing column.
  const std::vector<long long>& column(const std::string& name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<long long>> columns_;
};

/// `source` names the input in error messages. Errors report 1-based data
/// rows (the header is row 0) and the column name.
CsvTable read_csv(std::istream& in, const std::string& source = "<input>");
CsvTable read_csv_file(const std::string& path);

}  // namespace icais
