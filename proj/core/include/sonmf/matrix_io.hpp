#pragma once

#include <string>

#include "sonmf/matrix.hpp"

namespace sonmf {

// Headerless CSV, one row per line, values printed with 17 significant
// digits so doubles round-trip bit-exactly.  Readers validate rectangular
// shape and reject non-finite entries, reporting row/column on failure.
Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Matrix& m);

// Matrix Market exchange format.  The reader accepts both "array" (dense,
// column-major) and "coordinate" (1-based triplets) real general matrices;
// the writer emits the dense array form with 17 significant digits.
Matrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const Matrix& m);

// Dispatch on extension: .mtx -> Matrix Market, anything else -> CSV.
Matrix read_matrix_any(const std::string& path);

}  // namespace sonmf
