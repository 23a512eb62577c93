#pragma once

#include <fstream>
#include <initializer_list>
#include <span>
#include <string>

namespace nlsub::csv {

/// Shortest decimal string that parses back to the same double.
std::string format(double value);

/// Opens a file for writing; throws IoError on failure.
std::ofstream open(const std::string& path);

void write_row(std::ostream& out, std::span<const double> values);
void write_row(std::ostream& out, std::initializer_list<double> values);

/// Flushes and throws IoError if the stream is in a failed state.
void finish(std::ofstream& out, const std::string& path);

}  // namespace nlsub::csv
