#include "hhf/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace hhf::io {
namespace {

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view field = rest.substr(0, comma);
      double value = 0.0;
      const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": malformed number '" + std::string(field) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": expected " + std::to_string(rows.front().size()) +
                    " fields, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) {
    throw IoError("error reading " + path.string());
  }
  if (rows.empty()) {
    throw IoError(path.string() + " is empty");
  }
  return rows;
}

template <typename Fmt>
std::string render(Eigen::Index rows, Eigen::Index cols, Fmt cell) {
  std::string out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (j) out += ',';
      out += cell(i, j);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw IoError("cannot format value");
  }
  return std::string(buf, end);
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << contents;
  out.close();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  write_text(path, render(m.rows(), m.cols(),
                          [&](Eigen::Index i, Eigen::Index j) { return format_double(m(i, j)); }));
}

void write_binary_csv(const std::filesystem::path& path, const BitMatrix& m) {
  write_text(path, render(m.rows(), m.cols(), [&](Eigen::Index i, Eigen::Index j) {
               return std::string(1, m(i, j) ? '1' : '0');
             }));
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
  write_text(path, render(1, v.size(),
                          [&](Eigen::Index, Eigen::Index j) { return format_double(v[j]); }));
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

BitMatrix read_binary_csv(const std::filesystem::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (((m.array() != 0.0) && (m.array() != 1.0)).any()) {
    throw IoError(path.string() + " contains entries other than 0 and 1");
  }
  return m.cast<std::uint8_t>();
}

Vector read_vector_csv(const std::filesystem::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.rows() != 1) {
    throw IoError(path.string() + " must hold a single row");
  }
  return m.row(0).transpose();
}

}  // namespace hhf::io
