#pragma once

#include <string>
#include <string_view>

#include "spcert/linalg.hpp"

namespace spcert {

/// json: {"rows": R, "cols": C, "data": [row-major values]}
/// csv:  one matrix row per line, comma-separated decimals
enum class MatrixFormat { Csv, Json };

/// Csv for a ".csv" extension, Json otherwise.
MatrixFormat format_from_path(std::string_view path);

/// Throws ParseError (with line or byte offset) or DimensionMismatch.
Matrix parse_matrix(std::string_view text, MatrixFormat format);
Matrix load_matrix(const std::string& path, MatrixFormat format);

/// Values are written with 17 significant digits, so parse(format(A)) == A bit for bit.
std::string format_matrix(const Matrix& a, MatrixFormat format);

/// Writes text to path; throws IoError.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace spcert
