#ifndef HARDY_KERNELS_HPP
#define HARDY_KERNELS_HPP

#include <cstddef>
#include <span>

#include "hardy/geometry.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

/// k_a(z) = (1 - conj(a).z)^(-n). The base has real part >= 1 - |a| > 0 on the
/// closed ball, so the integer power is branch-free.
cplx cauchy_kernel(const Point& a, std::span<const cplx> z);
inline cplx cauchy_kernel(const Point& a, const BoundaryPoint& z) {
    return cauchy_kernel(a, std::span<const cplx>(z.coords()));
}
inline cplx cauchy_kernel(const Point& a, const Point& z) {
    return cauchy_kernel(a, std::span<const cplx>(z.coords()));
}

/// Closed-form pairing <k_a, k_b> = k_a(b); the reproducing identity.
cplx kernel_pair(const Point& a, const Point& b);

/// Validation band for the dimensionless constant c(a, p); values outside the
/// band flag quadrature under-resolution.
struct NormBand {
    double lo = 1e-3;
    double hi = 1e3;
};

struct NormConstant {
    double p = 2.0;
    double norm = 1.0; // ||k_a||_p
    double c = 1.0;    // norm * (1 - |a|^2)^(n/p')
};

/// ||k_a||_p by quadrature, with the rule pulled toward the pole whenever
/// |a| >= 0.1 (the pullback makes p = 2 exact and flattens the peak for the
/// other exponents). Returns both the norm and c(a, p).
NormConstant kernel_norm(const Point& a, double p, const QuadratureRule& rule,
                         const NormBand& band = {});

/// k_a normalized so its own p-norm is 1 (against the supplied rule).
class KernelHandle {
public:
    KernelHandle(Point pole, double p, double norm)
        : pole_(std::move(pole)), p_(p), norm_(norm) {}
    static KernelHandle raw(Point pole) { return KernelHandle(std::move(pole), 0.0, 1.0); }

    cplx operator()(std::span<const cplx> z) const { return cauchy_kernel(pole_, z) / norm_; }
    cplx operator()(const BoundaryPoint& z) const {
        return (*this)(std::span<const cplx>(z.coords()));
    }
    const Point& pole() const { return pole_; }
    double exponent() const { return p_; }
    double norm() const { return norm_; }
    bool normalized() const { return p_ > 0.0; }

private:
    Point pole_;
    double p_;    // 0 marks the raw profile
    double norm_; // divisor applied at evaluation
};

KernelHandle normalized_kernel(const Point& a, double p, const QuadratureRule& rule,
                               const NormBand& band = {});

/// Approximation kernel t^(n(p-1)) / |1 - (1-t) conj(zeta).z|^(np), t in (0,1],
/// p > 1. Identically 1 at t = 1 and t^(-n) on the diagonal.
double approx_kernel(const BoundaryPoint& zeta, const BoundaryPoint& z, double t, double p);

/// Sample grids for the empirical kernel-estimate constants. Counts are the
/// documented base grids; `refine` multiplies the density of every axis
/// (endpoints nest, so refined grids contain the base ones).
struct EstimateGrid {
    std::size_t t_count = 33;      // log-spaced in [t_min, 1]
    double t_min = 1e-4;
    std::size_t delta_count = 65;  // 0 plus log-spaced in [delta_min, 2]
    double delta_min = 1e-6;
    std::size_t offset_count = 17; // difference scan: fractions of the admissible cap
    double offset_min = 1e-4;
    std::size_t refine = 1;

    static EstimateGrid size_defaults() { return {}; }
    static EstimateGrid smoothness_defaults() {
        EstimateGrid g;
        g.t_min = 1e-3;
        return g;
    }
};

struct EstimateFit {
    double constant = 0.0;
    double witness_t = 0.0;
    double witness_delta = 0.0;  // delta(zeta, z) resp. delta(zeta, z0)
    double witness_offset = 0.0; // difference scan only: delta(z0, z)
    std::size_t samples = 0;
};

/// Empirical constant for the size bound: max over the grid of
/// K_t(zeta, z) * (delta + t)^(alpha + n) * t^(-alpha), alpha = n(p-1).
EstimateFit fit_size_estimate(std::size_t n, double p,
                              const EstimateGrid& grid = EstimateGrid::size_defaults());

/// Empirical constant for the difference bound on the admissible region
/// delta(z0, z) <= (t + delta(zeta, z0)) / (2D): max of
/// |K_t(zeta,z) - K_t(zeta,z0)| * delta(z0,z)^(-1/2) * (delta(zeta,z0)+t)^(n+1/2).
EstimateFit fit_smoothness_estimate(
    std::size_t n, double p, const EstimateGrid& grid = EstimateGrid::smoothness_defaults());

} // namespace hardy

#endif
