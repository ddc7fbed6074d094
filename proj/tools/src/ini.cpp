#include "bridgelab/cli/ini.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>
#include <sstream>

namespace bridgelab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

}  // namespace

IniDocument parse_ini(const std::string& text, const std::string& source) {
  IniDocument doc;
  doc.source = source;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(fmt::format("{}:{}: malformed section header", source, line));
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) {
        throw ConfigError(fmt::format("{}:{}: invalid section name '{}'", source, line, section));
      }
      if (doc.section_lines.count(section)) {
        throw ConfigError(fmt::format("{}:{}: duplicate section [{}]", source, line, section));
      }
      doc.section_lines[section] = line;
      doc.sections[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line));
    }
    if (section.empty()) {
      throw ConfigError(fmt::format("{}:{}: key outside of any section", source, line));
    }
    const std::string key = trim(s.substr(0, eq));
    if (!valid_name(key)) throw ConfigError(fmt::format("{}:{}: invalid key '{}'", source, line, key));
    auto& keys = doc.sections[section];
    if (keys.count(key)) {
      throw ConfigError(fmt::format("{}:{}: duplicate key '{}' in [{}]", source, line, key, section));
    }
    keys[key] = IniEntry{trim(s.substr(eq + 1)), line};
  }
  return doc;
}

IniDocument read_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ini(buf.str(), path);
}

}  // namespace bridgelab::cli
