#ifndef HARDY_QUADRATURE_HPP
#define HARDY_QUADRATURE_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/geometry.hpp"
#include "hardy/parallel.hpp"

namespace hardy {

/// |v|^p with cheap paths for the small integer and half-integer exponents the
/// norm formulas actually use.
double abs_pow(double magnitude, double p);
double abs_pow(const cplx& v, double p);

struct RuleOptions {
    /// Product rules beyond this node count overflow.
    std::size_t node_cap = 10'000'000;
    /// When true, an overflowing product rule falls back to a rank-1 lattice
    /// rule; when false, building it is a capacity error naming this flag.
    bool allow_qmc = false;
    /// Directory for the binary rule cache; empty disables caching.
    std::string cache_dir{};
};

/// Nodes on the unit sphere of C^n with positive weights approximating the
/// normalized surface measure. Plain rules have weights summing to 1; rules
/// adapted to boundary peaks trade that for resolution near the peaks.
class QuadratureRule {
public:
    QuadratureRule() = default; // empty rule; fill via build/load

    /// n = 1: equispaced points on the circle, 64 * 2^level of them.
    /// n >= 2: torus-action product rule (Gauss-Legendre in the simplex
    /// variables, equispaced angles), (16 * 2^level)^(2n-1) nodes, with a
    /// lattice-rule fallback once that exceeds the cap.
    static QuadratureRule build(std::size_t n, int level, const RuleOptions& opts = {});

    std::size_t dim() const { return n_; }
    int level() const { return level_; }
    std::size_t size() const { return weights_.size(); }
    bool low_discrepancy() const { return qmc_; }
    bool adapted() const { return adapted_; }
    /// Heuristic accuracy for smooth integrands; not a bound.
    double tolerance_hint() const { return tol_hint_; }

    std::span<const cplx> node(std::size_t i) const {
        return std::span<const cplx>(coords_.data() + i * n_, n_);
    }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }

    /// Rule pulled back through the ball automorphism exchanging 0 and
    /// `center`: nodes concentrate near center/|center| with spacing
    /// ~(1 - |center|^2), weights carry the Jacobian. Exact for |k_center|^2.
    QuadratureRule pulled_toward(const Point& center) const;

    /// Combination of per-peak pullbacks of this rule (one per distinct
    /// direction and dyadic depth scale among the hints, plus the unadapted
    /// base), with balance weights so each region is integrated by the copy
    /// that resolves it.
    QuadratureRule with_peaks(std::span<const Point> hints) const;

    void save(std::ostream& out) const;
    static QuadratureRule load(std::istream& in);

private:
    void renormalize();
    static QuadratureRule build_circle(int level);
    static QuadratureRule build_product(std::size_t n, int level, std::size_t m);
    static QuadratureRule build_lattice(std::size_t n, int level, std::size_t count);

    std::size_t n_ = 0;
    int level_ = 0;
    bool qmc_ = false;
    bool adapted_ = false;
    double tol_hint_ = 1e-10;
    CVec coords_;                 // size() * n_, node-major
    std::vector<double> weights_; // size()
};

namespace detail {

[[noreturn]] void throw_nonfinite(std::size_t node_index);

template <typename F>
double lp_norm_pow(F&& f, double p, const QuadratureRule& rule, Exec mode) {
    std::atomic<std::size_t> bad{static_cast<std::size_t>(-1)};
    const double total = block_sum(
        rule.size(),
        [&](std::size_t i) -> double {
            const cplx v = f(rule.node(i));
            const double t = abs_pow(v, p);
            if (!std::isfinite(t)) {
                std::size_t prev = bad.load(std::memory_order_relaxed);
                while (i < prev && !bad.compare_exchange_weak(prev, i)) {
                }
                return 0.0;
            }
            return rule.weight(i) * t;
        },
        mode);
    if (bad.load() != static_cast<std::size_t>(-1)) throw_nonfinite(bad.load());
    return total;
}

} // namespace detail

/// Discrete L^p(sigma) norm (sum_i w_i |f(node_i)|^p)^(1/p), p >= 1 finite.
template <typename F>
double lp_norm(F&& f, double p, const QuadratureRule& rule, Exec mode = default_exec()) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("lp_norm: p must satisfy 1 <= p < infinity");
    return std::pow(detail::lp_norm_pow(std::forward<F>(f), p, rule, mode), 1.0 / p);
}

/// Hermitian pairing sum_i w_i f_i conj(g_i); conjugation on the SECOND
/// argument, so pairing(f, k_b) reproduces f(b) for holomorphic f.
template <typename F, typename G>
cplx pairing(F&& f, G&& g, const QuadratureRule& rule, Exec mode = default_exec()) {
    std::atomic<std::size_t> bad{static_cast<std::size_t>(-1)};
    const cplx total = block_sum_complex(
        rule.size(),
        [&](std::size_t i) -> cplx {
            const cplx v = f(rule.node(i)) * std::conj(g(rule.node(i)));
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                std::size_t prev = bad.load(std::memory_order_relaxed);
                while (i < prev && !bad.compare_exchange_weak(prev, i)) {
                }
                return cplx(0.0, 0.0);
            }
            return rule.weight(i) * v;
        },
        mode);
    if (bad.load() != static_cast<std::size_t>(-1)) detail::throw_nonfinite(bad.load());
    return total;
}

/// Ball automorphism exchanging 0 and a, restricted to the closed ball.
CVec moebius_map(const Point& a, std::span<const cplx> w);

/// Builds a rule through the (n, level)-keyed disk cache when opts.cache_dir
/// is set; falls back to building in memory.
QuadratureRule cached_rule(std::size_t n, int level, const RuleOptions& opts);

} // namespace hardy

#endif
