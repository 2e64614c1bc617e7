#pragma once

// Headerless row-major CSV for matrices. Reals are written in the shortest
// decimal form that parses back to the same double, so a write/read cycle
// is lossless. Binary matrices are written as literal 0/1.

#include <filesystem>
#include <string>

#include "hhf/core.hpp"

namespace hhf::io {

std::string format_double(double value);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
void write_binary_csv(const std::filesystem::path& path, const BitMatrix& m);
// One row of n values.
void write_vector_csv(const std::filesystem::path& path, const Vector& v);

Matrix read_matrix_csv(const std::filesystem::path& path);
BitMatrix read_binary_csv(const std::filesystem::path& path);
Vector read_vector_csv(const std::filesystem::path& path);

// Writes `contents` to `path` in one shot, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& contents);

}  // namespace hhf::io
