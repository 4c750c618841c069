#pragma once

#include <string>

#include "pocs/types.hpp"

namespace pocs {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Strict double parse of a whole token; `line` is reported on failure.
double parse_double_token(const std::string& token, long line);

// Complex files use one matrix row per line, cells separated by ';', each
// cell a "re,im" pair. Real vectors are one value per line. Lines starting
// with '#' are comments and are skipped by every reader; writers may emit
// them to record provenance. All values are written via format_double, so a
// write/read round trip reproduces bit-identical data.

ComplexMatrix read_complex_matrix(const std::string& path);
ComplexVector read_complex_vector(const std::string& path);
RealVector read_real_vector(const std::string& path);

void write_complex_matrix(const std::string& path, const ComplexMatrix& A,
                          const std::string& comment = "");
void write_complex_vector(const std::string& path, const ComplexVector& v,
                          const std::string& comment = "");
void write_real_vector(const std::string& path, const RealVector& v,
                       const std::string& comment = "");

/// Writes arbitrary text, creating parent directories is the caller's job.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace pocs
