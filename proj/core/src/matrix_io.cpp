#include "sonmf/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sonmf {

namespace {

double parse_double(const std::string& token, const std::string& path,
                    size_t line_no) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw IoError(path + ":" + std::to_string(line_no) +
                  ": cannot parse value '" + token + "'");
  if (!std::isfinite(v))
    throw IoError(path + ":" + std::to_string(line_no) +
                  ": non-finite value '" + token + "'");
  return v;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
      const size_t a = token.find_first_not_of(" \t");
      const size_t b = token.find_last_not_of(" \t");
      if (a == std::string::npos)
        throw IoError(path + ":" + std::to_string(line_no) + ": empty field");
      row.push_back(parse_double(token.substr(a, b - a + 1), path, line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": ragged row (expected " +
                    std::to_string(rows.front().size()) + " fields, got " +
                    std::to_string(row.size()) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path + ": empty matrix file");

  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

void write_csv_matrix(const std::string& path, const Matrix& m) {
  check_finite(m, "matrix");
  std::ofstream out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_value(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw IoError(path + ": missing MatrixMarket banner");

  std::stringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || (format != "array" && format != "coordinate") ||
      field != "real" || symmetry != "general")
    throw IoError(path + ": unsupported MatrixMarket header '" + line + "'");

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] != '%') break;
  }
  std::stringstream dims(line);
  long rows = 0, cols = 0, nnz = 0;
  dims >> rows >> cols;
  if (format == "coordinate") dims >> nnz;
  if (rows <= 0 || cols <= 0)
    throw IoError(path + ": bad dimension line '" + line + "'");

  Matrix m = Matrix::Zero(rows, cols);
  if (format == "array") {
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) {
        std::string token;
        if (!(in >> token))
          throw IoError(path + ": truncated array section");
        m(i, j) = parse_double(token, path, ++line_no);
      }
  } else {
    for (long e = 0; e < nnz; ++e) {
      long i = 0, j = 0;
      std::string token;
      if (!(in >> i >> j >> token))
        throw IoError(path + ": truncated coordinate section");
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw IoError(path + ": coordinate out of range");
      m(i - 1, j - 1) = parse_double(token, path, ++line_no);
    }
  }
  return m;
}

void write_matrix_market(const std::string& path, const Matrix& m) {
  check_finite(m, "matrix");
  std::ofstream out = open_out(path);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out << format_value(m(i, j)) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

Matrix read_matrix_any(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".mtx") == 0)
    return read_matrix_market(path);
  return read_csv_matrix(path);
}

}  // namespace sonmf
