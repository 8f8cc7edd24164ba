#ifndef HARDY_LINALG_HPP
#define HARDY_LINALG_HPP

#include <cstddef>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy {

/// Dense Hermitian helpers for the small (N = sequence length) systems.
/// Matrices are row-major N x N vectors of complex doubles.

/// Eigenvalues in ascending order.
std::vector<double> hermitian_eigenvalues(const std::vector<cplx>& A, std::size_t N);

/// Largest eigenvalue and a unit eigenvector for it.
std::vector<cplx> hermitian_max_eigenvector(const std::vector<cplx>& A, std::size_t N,
                                            double& lambda_out);

/// lambda_max / lambda_min; +inf when the smallest eigenvalue is <= 0.
double hermitian_condition(const std::vector<cplx>& A, std::size_t N);

/// Solves A X = B for Hermitian positive-definite A; B and the result are
/// row-major N x nrhs. Throws std::runtime_error if the factorization fails.
std::vector<cplx> hermitian_solve(const std::vector<cplx>& A, std::size_t N,
                                  const std::vector<cplx>& B, std::size_t nrhs);

/// hermitian_solve plus mixed-precision iterative refinement: residuals are
/// accumulated in long double, corrections reuse the double factorization.
/// Reaches the evaluation-noise floor even near the conditioning cap.
std::vector<cplx> hermitian_solve_refined(const std::vector<cplx>& A, std::size_t N,
                                          const std::vector<cplx>& B, std::size_t nrhs,
                                          int steps = 2);

bool is_positive_definite(const std::vector<cplx>& A, std::size_t N);

} // namespace hardy

#endif
