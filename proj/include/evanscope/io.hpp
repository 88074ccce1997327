#ifndef EVANSCOPE_IO_HPP
#define EVANSCOPE_IO_HPP

#include <string>
#include <vector>

#include "evanscope/types.hpp"

namespace evanscope {

// Shortest decimal representation that round-trips through binary64.
std::string formatDouble(double x);
double parseDouble(const std::string& s);

// Writes to path via a temporary file followed by a rename.
void atomicWrite(const std::string& path, const std::string& contents);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string serialize() const;  // ',' separator, LF endings, header row
};

CsvTable parseCsv(const std::string& text);

}  // namespace evanscope

#endif
