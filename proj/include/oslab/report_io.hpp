#pragma once

// Report files: atomic writes and fixed-format numbers so identical inputs
// give byte-identical output.

#include <filesystem>
#include <string>
#include <vector>

namespace oslab::report {

// 17 significant digits, round-trippable.
std::string num(double v);
// Fixed 6 decimals for summaries.
std::string fixed6(double v);

// Writes to `path.tmp` and renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace oslab::report
