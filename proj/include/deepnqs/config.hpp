#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace deepnqs {

/// Flat `key = value` text: one pair per line, `#` starts a comment,
/// later keys overwrite earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values_file(const std::string& path);

/// Comma list ("0.5, 0.75") or inclusive range ("start:stop:step").
std::vector<double> parse_real_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

bool parse_bool(const std::string& text);

}  // namespace deepnqs
