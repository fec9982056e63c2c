#pragma once

// Dense reference computations for small matrices (tests and the verify
// suite only).

#include <vector>

namespace oracle {

// Row-major n x n symmetric matrix.
std::vector<double> symmetric_eigenvalues(const std::vector<double>& m, int n);
// det(M - E I) by LU with partial pivoting.
double shifted_determinant(const std::vector<double>& m, int n, double E);
// (M - E I)^{-1}, row-major.
std::vector<double> shifted_inverse(const std::vector<double>& m, int n, double E);
// Eigenvectors as columns of a row-major matrix, eigenvalues ascending.
std::vector<double> symmetric_eigenvectors(const std::vector<double>& m, int n);

}  // namespace oracle
