#pragma once

// Deterministic text output: CSV documents with the resolved configuration
// echoed as leading '#' lines, and write-temp-then-rename file creation.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dwb
{

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

class CsvDocument
{
public:
  CsvDocument(ConfigEcho const &config, std::vector<std::string> const &columns);
  void add_row(std::vector<std::string> const &cells);
  std::string const &text() const { return text_; }

private:
  std::size_t columns_;
  std::string text_;
};

/// Writes `contents` to `<path>.tmp` and renames it over `path`. Parent
/// directories are created.
void write_atomic(std::filesystem::path const &path, std::string const &contents);

std::string read_file(std::filesystem::path const &path);

/// Splits one CSV line on commas (no quoting; the outputs never need it).
std::vector<std::string> split_csv_line(std::string const &line);

} // namespace dwb
