#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace crowdbelief::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line number
  std::vector<std::string> fields;
};

// Comma-separated, double-quote escaping, blank lines skipped, UTF-8 BOM
// ignored. Throws Error(kIo) when the file cannot be read and Error(kParse)
// on an unterminated quote.
std::vector<Row> read_file(const std::filesystem::path& path);
std::vector<Row> parse(std::string_view text, const std::string& source);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace crowdbelief::csv
