#include "hardy/linalg.hpp"

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>

namespace hardy {

namespace {

Eigen::MatrixXcd to_eigen(const std::vector<cplx>& A, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXcd M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) M(i, j) = A[i * cols + j];
    return M;
}

} // namespace

std::vector<double> hermitian_eigenvalues(const std::vector<cplx>& A, std::size_t N) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(A, N, N),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
    return std::vector<double>(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
}

std::vector<cplx> hermitian_max_eigenvector(const std::vector<cplx>& A, std::size_t N,
                                            double& lambda_out) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(A, N, N));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_max_eigenvector: eigensolver failed");
    lambda_out = solver.eigenvalues()(static_cast<Eigen::Index>(N) - 1);
    std::vector<cplx> v(N);
    for (std::size_t i = 0; i < N; ++i)
        v[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(N) - 1);
    return v;
}

double hermitian_condition(const std::vector<cplx>& A, std::size_t N) {
    const auto ev = hermitian_eigenvalues(A, N);
    if (ev.front() <= 0.0) return std::numeric_limits<double>::infinity();
    return ev.back() / ev.front();
}

std::vector<cplx> hermitian_solve(const std::vector<cplx>& A, std::size_t N,
                                  const std::vector<cplx>& B, std::size_t nrhs) {
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(to_eigen(A, N, N));
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("hermitian_solve: factorization failed");
    const Eigen::MatrixXcd X = ldlt.solve(to_eigen(B, N, nrhs));
    std::vector<cplx> out(N * nrhs);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < nrhs; ++j) out[i * nrhs + j] = X(i, j);
    return out;
}

std::vector<cplx> hermitian_solve_refined(const std::vector<cplx>& A, std::size_t N,
                                          const std::vector<cplx>& B, std::size_t nrhs,
                                          int steps) {
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(to_eigen(A, N, N));
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("hermitian_solve_refined: factorization failed");
    Eigen::MatrixXcd X = ldlt.solve(to_eigen(B, N, nrhs));
    using lcplx = std::complex<long double>;
    for (int step = 0; step < steps; ++step) {
        Eigen::MatrixXcd R(N, nrhs);
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < nrhs; ++j) {
                lcplx acc(B[i * nrhs + j].real(), B[i * nrhs + j].imag());
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx a = A[i * N + k];
                    const cplx x = X(static_cast<Eigen::Index>(k),
                                     static_cast<Eigen::Index>(j));
                    acc -= lcplx(a.real(), a.imag()) * lcplx(x.real(), x.imag());
                }
                R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
            }
        }
        X += ldlt.solve(R);
    }
    std::vector<cplx> out(N * nrhs);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < nrhs; ++j) out[i * nrhs + j] = X(i, j);
    return out;
}

bool is_positive_definite(const std::vector<cplx>& A, std::size_t N) {
    Eigen::LLT<Eigen::MatrixXcd> llt(to_eigen(A, N, N));
    return llt.info() == Eigen::Success;
}

} // namespace hardy
