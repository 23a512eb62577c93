#include "nlsub/csv.hpp"

#include <charconv>
#include <cmath>

#include "nlsub/errors.hpp"

namespace nlsub::csv {

std::string format(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::ofstream open(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void write_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << format(values[i]);
  }
  out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  write_row(out, std::span<const double>(values.begin(), values.size()));
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
  out.close();
}

}  // namespace nlsub::csv
