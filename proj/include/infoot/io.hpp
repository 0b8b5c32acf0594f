#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "infoot/kernels.hpp"

namespace infoot::io {

/// Shortest decimal string that parses back to exactly `value`; integral
/// values keep a trailing ".0" so the column reads as floating point.
std::string format_double(double value);

/// Point-set CSV: header row required, numeric feature columns, optional
/// trailing integer column named `label`.
PointSet read_point_set_csv(const std::filesystem::path& path);
PointSet parse_point_set_csv(std::string_view text, const std::string& source_name = "<input>");
void write_point_set_csv(const std::filesystem::path& path, const PointSet& points);

/// Headerless grid of reals (couplings, precomputed distance matrices). A
/// first row containing non-numeric cells is skipped as a header.
Matrix read_matrix_csv(const std::filesystem::path& path);
Matrix parse_matrix_csv(std::string_view text, const std::string& source_name = "<input>");
void write_matrix_csv(const std::filesystem::path& path, const Matrix& values);

/// `query_id,x0,x1,...` with one row per projected query.
void write_projection_csv(const std::filesystem::path& path, const std::vector<Index>& query_ids,
                          const Matrix& coordinates);

/// Writes `contents` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);

}  // namespace infoot::io
