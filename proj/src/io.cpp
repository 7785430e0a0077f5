#include "dwb/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace dwb
{

CsvDocument::CsvDocument(ConfigEcho const &config, std::vector<std::string> const &columns)
    : columns_(columns.size())
{
  for (auto const &[k, v] : config)
    text_ += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    text_ += (i ? "," : "") + columns[i];
  text_ += "\n";
}

void CsvDocument::add_row(std::vector<std::string> const &cells)
{
  if (cells.size() != columns_)
    throw std::logic_error("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i)
    text_ += (i ? "," : "") + cells[i];
  text_ += "\n";
}

void write_atomic(std::filesystem::path const &path, std::string const &contents)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
  {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::string read_file(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(std::string const &line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;)
  {
    auto const comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
    out.back().pop_back();
  return out;
}

} // namespace dwb
