#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sonmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy.  The CLI maps these onto process exit codes, so keep the
// distinction between "your input is wrong" and "the math broke down".
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape mismatches, invalid ranks, malformed options.
struct DimensionError : Error {
  using Error::Error;
};

// Content-level rejection: non-finite entries, non-binary data where binary
// is required, negative data where nonnegative is required.
struct ValidationError : Error {
  using Error::Error;
};

// A small square system was numerically singular (condition above ~1e12).
struct SingularMatrixError : Error {
  using Error::Error;
};

// QR input had (numerically) dependent columns.
struct RankDeficiencyError : Error {
  using Error::Error;
};

// File-level failures: unreadable path, malformed format, unwritable output.
struct IoError : Error {
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

// Throws ValidationError naming the first non-finite entry.
void check_finite(const Matrix& m, const std::string& name);

// Throws ValidationError naming the first entry that is not exactly 0 or 1.
void check_binary(const Matrix& m, const std::string& name);

// Throws ValidationError naming the first negative entry.
void check_nonnegative(const Matrix& m, const std::string& name);

// FNV-1a over the raw column-major bytes; used for input digests in run
// manifests and for shared-instance assertions in trials.
std::uint64_t matrix_digest(const Matrix& m);

// Entries with |v| <= zero_tol count as zero (multiplicative baselines park
// entries at a small floor rather than exactly 0).
inline constexpr double kZeroTol = 1e-10;

}  // namespace sonmf
