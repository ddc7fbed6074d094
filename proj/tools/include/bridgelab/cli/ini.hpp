#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bridgelab::cli {

// Parse or validation failure in a config file; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IniEntry {
  std::string value;
  std::size_t line = 0;
};

// Sections of key = value lines. Full-line comments start with '#' or ';'.
// Duplicate sections and duplicate keys are errors.
struct IniDocument {
  std::string source;  // file name used in messages
  std::map<std::string, std::map<std::string, IniEntry>> sections;
  std::map<std::string, std::size_t> section_lines;
};

IniDocument parse_ini(const std::string& text, const std::string& source);
IniDocument read_ini(const std::string& path);

}  // namespace bridgelab::cli
