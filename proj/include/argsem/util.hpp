#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace argsem {

std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);

bool file_exists(const std::string& path);

// splits on a single delimiter, keeps empty fields
std::vector<std::string> split_on(std::string_view s, char delim);

// splits on runs of whitespace, drops empty fields
std::vector<std::string> split_ws(std::string_view s);

std::string strip(std::string_view s);

std::string lowercase_ascii(std::string_view s);

uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL);

std::string format_seconds(double s);

}  // namespace argsem
