#pragma once

// CSV output with a full config echo in '#' header lines. Files are written
// to a temporary name and renamed into place.

#include <string>
#include <vector>

#include "config.hpp"

namespace spcli {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Header layout:
//   # spcoh <subcommand>
//   # key = value        (one line per config key)
//   col1,col2,...
void write_csv(const std::string& path, const std::string& subcommand,
               const RunConfig& config, const CsvTable& table);

// Re-parses the '#'-header of a CSV written by write_csv.
std::map<std::string, std::string> read_csv_header(const std::string& path);

}  // namespace spcli
