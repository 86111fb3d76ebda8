#pragma once

// Serialization of pooling matrices.
//
// Canonical format: a JSON document
//   {"format_version": 1, "q": .., "m": .., "n": .., "t": ..,
//    "pools": [[item, ...], ...],
//    "labels": [{"slope": a | "inf", "intercept": b}, ...]}
// written one pool per line so diffs stay readable. q and m are null for
// matrices that were not produced by the builder.
//
// Dense export: t lines of n comma-separated 0/1 entries, LF terminated, rows
// in canonical pool order.

#include <filesystem>
#include <string>
#include <string_view>

#include "multipool/design.hpp"

namespace multipool::io {

inline constexpr int kMatrixFormatVersion = 1;

std::string to_json(const PoolingMatrix& matrix);
/// Throws ParseError on malformed documents or unsupported versions.
PoolingMatrix matrix_from_json(std::string_view text);

std::string to_dense_csv(const PoolingMatrix& matrix);
/// Throws ParseError (with line and column) on non-binary entries or ragged rows.
PoolingMatrix matrix_from_dense_csv(std::string_view text);

enum class MatrixFormat { Json, Csv };

void write_matrix(const std::filesystem::path& path, const PoolingMatrix& matrix, MatrixFormat format);
/// Reads either format; JSON is recognised by a leading '{'.
PoolingMatrix read_matrix(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace multipool::io
