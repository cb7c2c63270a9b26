#include "calderon/matrix.hpp"

#include "calderon/errors.hpp"

#include <fstream>
#include <iomanip>

namespace calderon {

SymMatrix::SymMatrix(const Eigen::MatrixXd& lower) {
  if (lower.rows() != lower.cols()) throw ParameterError("SymMatrix: matrix must be square");
  data_ = lower.triangularView<Eigen::Lower>();
  data_.triangularView<Eigen::StrictlyUpper>() = data_.transpose();
  if (!data_.allFinite()) throw ParameterError("SymMatrix: non-finite entry");
}

SymMatrix SymMatrix::identity(Eigen::Index n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }

DiagMatrix::DiagMatrix(Eigen::VectorXd entries) : entries_(std::move(entries)) {
  for (Eigen::Index i = 0; i < entries_.size(); ++i)
    if (!(entries_[i] > 0.0)) throw ParameterError("DiagMatrix: entries must be positive");
}

void write_dense(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << m.rows() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

void write_diagonal(const std::string& path, const DiagMatrix& d) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < d.size(); ++i) out << (i ? " " : "") << d[i];
  out << '\n';
}

Eigen::MatrixXd read_dense(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Eigen::Index n = 0;
  in >> n;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) in >> m(i, j);
  if (!in) throw Error("truncated matrix file " + path);
  return m;
}

}  // namespace calderon
