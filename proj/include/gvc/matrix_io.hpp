#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace gvc {

/// Dense CSV, one matrix row per line, 12 significant digits.
void write_matrix_csv(const Eigen::MatrixXd& matrix, std::ostream& out);

/// GVCM binary: 16-byte header (magic "GVCM", u32 rows, u32 cols, 4 reserved
/// zero bytes, all little-endian) followed by row-major doubles.
void write_matrix_binary(const Eigen::MatrixXd& matrix, std::ostream& out);
Eigen::MatrixXd read_matrix_binary(std::istream& in);

void write_matrix_binary_file(const Eigen::MatrixXd& matrix,
                              const std::string& path);
Eigen::MatrixXd read_matrix_binary_file(const std::string& path);

}  // namespace gvc
