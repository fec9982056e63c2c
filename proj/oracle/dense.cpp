#include "oracle/dense.hpp"

#include <Eigen/Dense>

namespace oracle {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<double>& m, int n) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = m[static_cast<std::size_t>(i * n + j)];
  }
  return a;
}

std::vector<double> from_eigen(const Eigen::MatrixXd& a) {
  std::vector<double> out(static_cast<std::size_t>(a.rows() * a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out[static_cast<std::size_t>(i * a.cols() + j)] = a(i, j);
  }
  return out;
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const std::vector<double>& m, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m, n), Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

std::vector<double> symmetric_eigenvectors(const std::vector<double>& m, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m, n));
  return from_eigen(solver.eigenvectors());
}

double shifted_determinant(const std::vector<double>& m, int n, double E) {
  Eigen::MatrixXd a = to_eigen(m, n);
  a.diagonal().array() -= E;
  return a.partialPivLu().determinant();
}

std::vector<double> shifted_inverse(const std::vector<double>& m, int n, double E) {
  Eigen::MatrixXd a = to_eigen(m, n);
  a.diagonal().array() -= E;
  return from_eigen(a.partialPivLu().inverse());
}

}  // namespace oracle
