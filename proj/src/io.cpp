#include "evanscope/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace evanscope {

std::string formatDouble(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parseDouble(const std::string& s) {
  double out = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc{})
    throw Error(ErrorCode::ConfigError, "cannot parse number: " + s);
  return out;
}

void atomicWrite(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::Internal, "cannot open " + tmp);
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) throw Error(ErrorCode::Internal, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string CsvTable::serialize() const {
  std::ostringstream os;
  for (size_t j = 0; j < header.size(); ++j)
    os << header[j] << (j + 1 < header.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (size_t j = 0; j < row.size(); ++j)
      os << row[j] << (j + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

CsvTable parseCsv(const std::string& text) {
  CsvTable out;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (first) {
      out.header = cells;
      first = false;
    } else {
      out.rows.push_back(cells);
    }
  }
  return out;
}

}  // namespace evanscope
