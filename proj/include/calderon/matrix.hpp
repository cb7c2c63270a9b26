#pragma once

#include <Eigen/Dense>

#include <string>

namespace calderon {

/// Dense symmetric matrix. The lower triangle of the input is authoritative;
/// the stored matrix is always exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& lower);

  static SymMatrix identity(Eigen::Index n);

  [[nodiscard]] Eigen::Index size() const { return data_.rows(); }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }
  [[nodiscard]] const Eigen::MatrixXd& dense() const { return data_; }

 private:
  Eigen::MatrixXd data_;
};

/// Positive diagonal matrix.
class DiagMatrix {
 public:
  DiagMatrix() = default;
  explicit DiagMatrix(Eigen::VectorXd entries);

  [[nodiscard]] Eigen::Index size() const { return entries_.size(); }
  [[nodiscard]] double operator[](Eigen::Index i) const { return entries_[i]; }
  [[nodiscard]] const Eigen::VectorXd& entries() const { return entries_; }
  [[nodiscard]] Eigen::MatrixXd dense() const { return entries_.asDiagonal(); }

 private:
  Eigen::VectorXd entries_;
};

/// Writes `n` followed by n rows of n decimals.
void write_dense(const std::string& path, const Eigen::MatrixXd& m);
/// Writes the diagonal as a single line of entries.
void write_diagonal(const std::string& path, const DiagMatrix& d);
/// Reads the format produced by write_dense.
Eigen::MatrixXd read_dense(const std::string& path);

}  // namespace calderon
