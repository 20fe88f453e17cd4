#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace efimov::io {

using Json = nlohmann::ordered_json;
using Config = std::map<std::string, std::string>;

const char* library_version();

// Scientific notation with 12 significant digits.
std::string format_number(double value);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

// Comma separated, header row, LF line endings.
void write_csv(std::ostream& out, const Table& table);
void write_csv(const std::string& path, const Table& table);

// "key = value" per line; '#' starts a comment; blank lines ignored. Throws ConfigError on
// unreadable files, lines without '=', empty keys and duplicate keys.
Config parse_config(std::istream& in, const std::string& source = "<stream>");
Config read_config(const std::string& path);

// Typed lookups; a present but malformed value throws ConfigError.
std::optional<double> get_number(const Config& config, const std::string& key);
std::optional<int> get_integer(const Config& config, const std::string& key);
std::optional<std::string> get_string(const Config& config, const std::string& key);

// Real number including "inf", "+inf", "-inf"; throws ConfigError otherwise.
double parse_number(const std::string& text, const std::string& what);

void write_json(const std::string& path, const Json& value);

}  // namespace efimov::io
