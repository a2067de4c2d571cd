#include "gvc/matrix_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>

#include "gvc/errors.hpp"
#include "gvc/reports.hpp"

namespace gvc {

namespace {

constexpr char kMagic[4] = {'G', 'V', 'C', 'M'};

void put_u32(std::ostream& out, std::uint32_t value) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>(value >> (8 * i));
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i)
    value |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void write_matrix_csv(const Eigen::MatrixXd& matrix, std::ostream& out) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ',';
      out << reports::format_value(matrix(i, j));
    }
    out << '\n';
  }
}

void write_matrix_binary(const Eigen::MatrixXd& matrix, std::ostream& out) {
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(matrix.rows()));
  put_u32(out, static_cast<std::uint32_t>(matrix.cols()));
  put_u32(out, 0);  // reserved
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      const double v = matrix(i, j);
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      char bytes[8];
      for (int b = 0; b < 8; ++b)
        bytes[b] = static_cast<char>(bits >> (8 * b));
      out.write(bytes, 8);
    }
  }
}

Eigen::MatrixXd read_matrix_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError("not a GVCM matrix stream");
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  get_u32(in);  // reserved
  Eigen::MatrixXd matrix(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      unsigned char bytes[8];
      in.read(reinterpret_cast<char*>(bytes), 8);
      if (!in) throw ParseError("truncated GVCM matrix stream");
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
      double v;
      std::memcpy(&v, &bits, sizeof v);
      matrix(i, j) = v;
    }
  }
  return matrix;
}

void write_matrix_binary_file(const Eigen::MatrixXd& matrix,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_matrix_binary(matrix, out);
}

Eigen::MatrixXd read_matrix_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix_binary(in);
}

}  // namespace gvc
