#pragma once

// File emitters for the CLI: CSV tables, JSON documents and gnuplot stubs.
// Everything is written from the calling thread after the computation.

#include <concepts>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <string>
#include <vector>

namespace qploc::cli {

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);
  CsvWriter& operator<<(double v);
  template <std::integral T>
  CsvWriter& operator<<(T v) {
    return write_integer(static_cast<long long>(v));
  }
  CsvWriter& operator<<(const std::string& v);
  CsvWriter& operator<<(const char* v) { return *this << std::string(v); }
  void end_row();

 private:
  CsvWriter& write_integer(long long v);
  void separator();
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t filled_ = 0;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Minimal gnuplot script plotting column `ycol` against `xcol` of a CSV file.
void write_plot_stub(const std::filesystem::path& path, const std::string& csv, int xcol, int ycol,
                     const std::string& xlabel, const std::string& ylabel);

}  // namespace qploc::cli
