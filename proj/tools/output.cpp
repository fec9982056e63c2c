#include "output.hpp"

#include <stdexcept>

#include "qploc/config.hpp"

namespace qploc::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  bool first = true;
  for (const auto& h : header) {
    out_ << (first ? "" : ",") << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::separator() {
  if (filled_ == columns_) throw std::logic_error("csv row has too many columns");
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::operator<<(double v) {
  separator();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::write_integer(long long v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  separator();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("csv row has too few columns");
  out_ << '\n';
  filled_ = 0;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

void write_plot_stub(const std::filesystem::path& path, const std::string& csv, int xcol, int ycol,
                     const std::string& xlabel, const std::string& ylabel) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel '" << xlabel << "'\n"
      << "set ylabel '" << ylabel << "'\n"
      << "plot '" << csv << "' using " << xcol << ':' << ycol << " with points pt 7 ps 0.3\n";
}

}  // namespace qploc::cli
