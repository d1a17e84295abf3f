#ifndef SLR_IO_H_
#define SLR_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace slr {

// Reads a text file into lines, stripping a trailing '\r'. Throws LoadError
// when the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);

// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

// Parses one JSON-lines record; throws ParseError naming the line.
nlohmann::json parse_json_line(const std::string& source, int line_number,
                               const std::string& line);

// 64-bit FNV-1a, used for fingerprints and seed derivation.
uint64_t fnv1a64(std::string_view data);

std::string hex64(uint64_t value);

}  // namespace slr

#endif  // SLR_IO_H_
