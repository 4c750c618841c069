#include "pocs/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "pocs/errors.hpp"

namespace pocs {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double_token(const std::string& token, long line) {
  std::size_t begin = token.find_first_not_of(" \t");
  std::size_t end = token.find_last_not_of(" \t\r");
  if (begin == std::string::npos) {
    throw ParseError("empty numeric field", line);
  }
  const std::string trimmed = token.substr(begin, end - begin + 1);
  const char* first = trimmed.data();
  const char* last = first + trimmed.size();
  double value = 0.0;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("bad numeric field '" + trimmed + "'", line);
  }
  return value;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

bool skippable(const std::string& line) {
  const std::size_t begin = line.find_first_not_of(" \t\r");
  return begin == std::string::npos || line[begin] == '#';
}

Complex parse_complex_cell(const std::string& cell, long line) {
  const auto parts = split(cell, ',');
  if (parts.size() != 2) {
    throw ParseError("complex cell must be 're,im', got '" + cell + "'", line);
  }
  return {parse_double_token(parts[0], line), parse_double_token(parts[1], line)};
}

std::vector<std::pair<long, std::string>> data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::pair<long, std::string>> lines;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!skippable(line)) lines.emplace_back(number, line);
  }
  return lines;
}

void write_or_throw(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string comment_block(const std::string& comment) {
  if (comment.empty()) return "";
  std::string block;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = comment.find('\n', start);
    block += "# " + comment.substr(start, pos - start) + "\n";
    if (pos == std::string::npos) return block;
    start = pos + 1;
  }
}

}  // namespace

ComplexMatrix read_complex_matrix(const std::string& path) {
  const auto lines = data_lines(path);
  if (lines.empty()) throw ParseError("no data rows in '" + path + "'", 0);

  std::vector<std::vector<Complex>> rows;
  for (const auto& [number, text] : lines) {
    const auto cells = split(text, ';');
    std::vector<Complex> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) row.push_back(parse_complex_cell(cell, number));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row has " + std::to_string(row.size()) + " columns, expected " +
                           std::to_string(rows.front().size()),
                       number);
    }
    rows.push_back(std::move(row));
  }

  ComplexMatrix A(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return A;
}

ComplexVector read_complex_vector(const std::string& path) {
  const auto lines = data_lines(path);
  if (lines.empty()) throw ParseError("no data rows in '" + path + "'", 0);
  ComplexVector v(static_cast<Index>(lines.size()));
  Index k = 0;
  for (const auto& [number, text] : lines) {
    if (text.find(';') != std::string::npos) {
      throw ParseError("expected one complex cell per line", number);
    }
    v[k++] = parse_complex_cell(text, number);
  }
  return v;
}

RealVector read_real_vector(const std::string& path) {
  const auto lines = data_lines(path);
  if (lines.empty()) throw ParseError("no data rows in '" + path + "'", 0);
  RealVector v(static_cast<Index>(lines.size()));
  Index k = 0;
  for (const auto& [number, text] : lines) v[k++] = parse_double_token(text, number);
  return v;
}

void write_complex_matrix(const std::string& path, const ComplexMatrix& A,
                          const std::string& comment) {
  std::string text = comment_block(comment);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (j > 0) text += ';';
      text += format_double(A(i, j).real()) + "," + format_double(A(i, j).imag());
    }
    text += '\n';
  }
  write_or_throw(path, text);
}

void write_complex_vector(const std::string& path, const ComplexVector& v,
                          const std::string& comment) {
  std::string text = comment_block(comment);
  for (Index k = 0; k < v.size(); ++k) {
    text += format_double(v[k].real()) + "," + format_double(v[k].imag()) + "\n";
  }
  write_or_throw(path, text);
}

void write_real_vector(const std::string& path, const RealVector& v, const std::string& comment) {
  std::string text = comment_block(comment);
  for (Index k = 0; k < v.size(); ++k) text += format_double(v[k]) + "\n";
  write_or_throw(path, text);
}

void write_text_file(const std::string& path, const std::string& text) {
  write_or_throw(path, text);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace pocs
