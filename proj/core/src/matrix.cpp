#include "sonmf/matrix.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace sonmf {

namespace {

std::string entry_message(const std::string& name, Index i, Index j,
                          double v, const std::string& why) {
  std::ostringstream os;
  os << name << "(" << i << "," << j << ") = " << v << " " << why;
  return os.str();
}

}  // namespace

void check_finite(const Matrix& m, const std::string& name) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j)))
        throw ValidationError(entry_message(name, i, j, m(i, j),
                                            "is not finite"));
}

void check_binary(const Matrix& m, const std::string& name) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (v != 0.0 && v != 1.0)
        throw ValidationError(entry_message(name, i, j, v, "is not 0/1"));
    }
}

void check_nonnegative(const Matrix& m, const std::string& name) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!(m(i, j) >= 0.0))
        throw ValidationError(entry_message(name, i, j, m(i, j),
                                            "is negative or NaN"));
}

std::uint64_t matrix_digest(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  auto mix = [&h](const void* bytes, size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  mix(&rows, sizeof rows);
  mix(&cols, sizeof cols);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      mix(&v, sizeof v);
    }
  return h;
}

}  // namespace sonmf
