#include "icais/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "icais/error.hpp"

namespace icais {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    out.push_back(line.substr(begin, comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header,
                   std::vector<std::vector<long long>> columns)
    : header_(std::move(header)), columns_(std::move(columns)) {}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header_)
    if (h == name) return true;
  return false;
}

const std::vector<long long>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return columns_[i];
  std::string known;
  for (const auto& h : header_) known += (known.empty() ? "" : ", ") + h;
  throw DataError("column '" + name + "' not found (columns: " + known + ")");
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  strip_cr(line);
  std::vector<std::string> header = split(line);
  std::set<std::string> seen;
  for (const auto& h : header) {
    if (h.empty()) throw DataError(source + ": empty column name in header");
    if (!seen.insert(h).second)
      throw DataError(source + ": duplicate column '" + h + "'");
  }

  std::vector<std::vector<long long>> columns(header.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw DataError(source + ": row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      long long v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw DataError(source + ": non-integer cell '" + cell + "' at row " +
                        std::to_string(row) + ", column '" + header[c] + "'");
      columns[c].push_back(v);
    }
  }
  return CsvTable(std::move(header), std::move(columns));
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return read_csv(in, path);
}

}  // namespace icais
