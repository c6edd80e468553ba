#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace boksim::io {

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary sibling file and rename, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

// Parses a whole field as a finite double; throws ValidationError otherwise.
double parse_double(std::string_view text, std::string_view context);

std::vector<std::string> split(std::string_view text, char delimiter);
std::string_view trim(std::string_view text);

// Minimal RFC 4180 quoting for CSV fields.
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_parse_line(std::string_view line);

}  // namespace boksim::io
