#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aracne::util {

std::string trim(std::string_view text);
std::string rtrim(std::string_view text);
std::string ltrim(std::string_view text);
std::string to_lower(std::string_view text);

std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

bool starts_with(std::string_view text, std::string_view prefix);
bool ends_with(std::string_view text, std::string_view suffix);
bool contains_ci(std::string_view haystack, std::string_view needle);

// Shell-style word split honoring single/double quotes. No expansions.
std::vector<std::string> shell_words(std::string_view line);

// fnmatch-style glob: '*' any run, '?' one char. Anchored at both ends.
bool glob_match(std::string_view pattern, std::string_view text);

std::string base64_encode(std::string_view data);
std::string base64_decode(std::string_view data);

// Drops ANSI escape sequences (CSI, OSC, lone ESC pairs) and control bytes
// other than '\n' and '\t'. '\r' is dropped so CRLF collapses to LF.
std::string strip_control_sequences(std::string_view text);

std::string format_double(double value, int decimals);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace aracne::util
