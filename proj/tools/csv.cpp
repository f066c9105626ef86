#include "csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spcli {

void write_csv(const std::string& path, const std::string& subcommand,
               const RunConfig& config, const CsvTable& table) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp);
    if (!out) throw std::runtime_error("cannot write " + temp.string());
    out << "# spcoh " << subcommand << "\n";
    for (const auto& [key, value] : config.echo()) {
      out << "# " << key << " = " << value << "\n";
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << table.columns[c];
    }
    out << "\n";
    char buf[32];
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        std::snprintf(buf, sizeof buf, "%.12g", row[c]);
        out << (c ? "," : "") << buf;
      }
      out << "\n";
    }
    if (!out.good()) throw std::runtime_error("write failed: " + path);
  }
  fs::rename(temp, target);
}

std::map<std::string, std::string> read_csv_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line, header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') break;
    header += line.substr(1) + "\n";
  }
  // The first header line names the tool, not a key; drop it.
  const auto newline = header.find('\n');
  return parse_config_text(newline == std::string::npos
                               ? std::string()
                               : header.substr(newline + 1));
}

}  // namespace spcli
