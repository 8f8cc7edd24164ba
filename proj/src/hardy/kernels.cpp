#include "hardy/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hardy {

namespace {

cplx cpow_int(cplx base, unsigned e) {
    cplx r(1.0, 0.0);
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

struct Witness {
    double ratio = -1.0;
    double t = 0.0, delta = 0.0, offset = 0.0;
    void consider(double r, double tt, double d, double off) {
        if (r > ratio) {
            ratio = r;
            t = tt;
            delta = d;
            offset = off;
        }
    }
};

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = hi;
        return g;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::size_t refined(std::size_t count, std::size_t refine) {
    return (count - 1) * refine + 1;
}

// |1 - (1-t) u| for the inner product u realized by the 2-plane construction.
double kt_denominator(const cplx& u, double t) {
    return std::abs(cplx(1.0, 0.0) - (1.0 - t) * u);
}

// K_t at inner product u.
double kt_value(const cplx& u, double t, std::size_t n, double p) {
    const double alpha = static_cast<double>(n) * (p - 1.0);
    return abs_pow(t, alpha) / abs_pow(kt_denominator(u, t), static_cast<double>(n) * p);
}

// Inner products <zeta, z> of the 2-plane pair construction at pseudo-distance
// delta: the circle pair for n = 1, the real section otherwise.
cplx pair_inner(std::size_t n, double delta) {
    if (n == 1) {
        // |1 - e^{i theta}| = delta
        const double th = 2.0 * std::asin(std::clamp(delta / 2.0, 0.0, 1.0));
        return cplx(std::cos(th), std::sin(th));
    }
    return cplx(1.0 - delta, 0.0);
}

} // namespace

cplx cauchy_kernel(const Point& a, std::span<const cplx> z) {
    const cplx base = cplx(1.0, 0.0) - hermitian_inner(std::span<const cplx>(a.coords()), z);
    return cpow_int(cplx(1.0, 0.0) / base, static_cast<unsigned>(a.dim()));
}

cplx kernel_pair(const Point& a, const Point& b) {
    return cauchy_kernel(a, std::span<const cplx>(b.coords()));
}

NormConstant kernel_norm(const Point& a, double p, const QuadratureRule& rule,
                         const NormBand& band) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("kernel_norm: p must satisfy 1 <= p < infinity");
    if (rule.dim() != a.dim()) throw dimension_mismatch(rule.dim(), a.dim());
    const QuadratureRule* r = &rule;
    QuadratureRule pulled;
    if (a.abs() >= 0.1 && !rule.adapted()) {
        pulled = rule.pulled_toward(a);
        r = &pulled;
    }
    NormConstant nc;
    nc.p = p;
    nc.norm = lp_norm([&](std::span<const cplx> z) { return cauchy_kernel(a, z); }, p, *r);
    const double n_over_pconj = static_cast<double>(a.dim()) * (p - 1.0) / p;
    nc.c = nc.norm * abs_pow(a.one_minus_abs2(), n_over_pconj);
    if (!(nc.c >= band.lo && nc.c <= band.hi))
        throw std::runtime_error("kernel_norm: c(a,p) = " + std::to_string(nc.c) +
                                 " escaped the validation band [" + std::to_string(band.lo) +
                                 ", " + std::to_string(band.hi) +
                                 "]; the quadrature rule under-resolves this pole");
    return nc;
}

KernelHandle normalized_kernel(const Point& a, double p, const QuadratureRule& rule,
                               const NormBand& band) {
    return KernelHandle(a, p, kernel_norm(a, p, rule, band).norm);
}

double approx_kernel(const BoundaryPoint& zeta, const BoundaryPoint& z, double t, double p) {
    if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("approx_kernel: t must lie in (0, 1]");
    if (!(p > 1.0)) throw std::invalid_argument("approx_kernel: p must be > 1");
    const cplx u = hermitian_inner(zeta, z);
    return kt_value(u, t, zeta.dim(), p);
}

EstimateFit fit_size_estimate(std::size_t n, double p, const EstimateGrid& grid) {
    if (!(p > 1.0)) throw std::invalid_argument("fit_size_estimate: p must be > 1");
    if (grid.t_count < 2 || grid.delta_count < 2 || grid.refine < 1)
        throw empty_sample_error("fit_size_estimate: empty sample grid");
    const auto ts = log_grid(grid.t_min, 1.0, refined(grid.t_count, grid.refine));
    auto deltas = log_grid(grid.delta_min, 2.0, refined(grid.delta_count, grid.refine));
    deltas.insert(deltas.begin(), 0.0);

    // alpha + n = np, so the ratio collapses to a single power.
    const double np = static_cast<double>(n) * p;
    Witness best;
    std::size_t samples = 0;
    for (const double t : ts) {
        for (const double d : deltas) {
            const cplx u = pair_inner(n, d);
            const double ratio = abs_pow((d + t) / kt_denominator(u, t), np);
            best.consider(ratio, t, d, 0.0);
            ++samples;
        }
    }
    return EstimateFit{best.ratio, best.t, best.delta, 0.0, samples};
}

EstimateFit fit_smoothness_estimate(std::size_t n, double p, const EstimateGrid& grid) {
    if (!(p > 1.0)) throw std::invalid_argument("fit_smoothness_estimate: p must be > 1");
    if (grid.t_count < 2 || grid.delta_count < 2 || grid.offset_count < 2 || grid.refine < 1)
        throw empty_sample_error("fit_smoothness_estimate: empty sample grid");
    const auto ts = log_grid(grid.t_min, 1.0, refined(grid.t_count, grid.refine));
    auto deltas = log_grid(grid.delta_min, 2.0, refined(grid.delta_count, grid.refine));
    deltas.insert(deltas.begin(), 0.0);
    const auto fractions = log_grid(grid.offset_min, 1.0, refined(grid.offset_count, grid.refine));

    // zeta = e1; z0 in the 2-plane at delta0; z moved off z0 by delta_z along
    // the in-plane (both signs), phase, and (n >= 2) skew directions. All
    // quantities reduce to the two inner products <zeta,z> and <zeta,z0>.
    const double half_exp = static_cast<double>(n) + 0.5;
    Witness best;
    std::size_t samples = 0;
    for (const double t : ts) {
        for (const double d0 : deltas) {
            const double cap = (t + d0) / (2.0 * kQuasiTriangleD);
            const cplx u0 = pair_inner(n, d0);
            const double k0 = kt_value(u0, t, n, p);
            const double th0 = n == 1 ? 2.0 * std::asin(std::clamp(d0 / 2.0, 0.0, 1.0))
                                      : std::acos(std::clamp(1.0 - d0, -1.0, 1.0));
            for (const double frac : fractions) {
                const double dz = frac * cap;
                if (dz <= 0.0 || dz > 2.0) continue;
                // Realizable inner products <zeta, z> at prescribed
                // delta(z0, z) = dz.
                cplx inners[3];
                std::size_t dirs = 0;
                if (n == 1) {
                    const double phi = 2.0 * std::asin(std::clamp(dz / 2.0, 0.0, 1.0));
                    inners[dirs++] = cplx(std::cos(th0 + phi), std::sin(th0 + phi));
                    inners[dirs++] = cplx(std::cos(th0 - phi), std::sin(th0 - phi));
                } else {
                    const double beta = std::acos(std::clamp(1.0 - dz, -1.0, 1.0));
                    // z = cos(beta) z0 + sin(beta) v: in-plane v = +-w_perp
                    // gives cos(th0 -+ beta); v = i w_perp gives the skew
                    // section cos(th0)cos(beta) + i sin(th0)sin(beta).
                    inners[dirs++] = cplx(std::cos(th0 - beta), 0.0);
                    inners[dirs++] = cplx(std::cos(th0 + beta), 0.0);
                    inners[dirs++] =
                        cplx(std::cos(th0) * std::cos(beta), std::sin(th0) * std::sin(beta));
                }
                for (std::size_t di = 0; di < dirs; ++di) {
                    const double kz = kt_value(inners[di], t, n, p);
                    const double ratio = std::abs(kz - k0) / std::sqrt(dz) *
                                         abs_pow(d0 + t, half_exp);
                    best.consider(ratio, t, d0, dz);
                    ++samples;
                }
            }
        }
    }
    if (samples == 0)
        throw empty_sample_error("fit_smoothness_estimate: admissible region is empty");
    return EstimateFit{best.ratio, best.t, best.delta, best.offset, samples};
}

} // namespace hardy
