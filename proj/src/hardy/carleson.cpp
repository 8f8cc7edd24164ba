#include "hardy/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hardy/dual_system.hpp"
#include "hardy/kernels.hpp"
#include "hardy/linalg.hpp"

namespace hardy {

AtomicMeasure carleson_measure(const PointSequence& S) {
    AtomicMeasure mu;
    const double n = static_cast<double>(S.dim());
    mu.atoms = S.points();
    mu.masses.resize(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        mu.masses[i] = abs_pow(S[i].one_minus_abs2(), n);
        mu.total += mu.masses[i];
    }
    return mu;
}

namespace {

std::vector<CVec> tent_centers(const PointSequence& S) {
    std::vector<CVec> centers;
    const std::size_t n = S.dim();
    for (const Point& a : S.points()) {
        if (a.abs() < 1e-12) continue;
        CVec dir = a.coords();
        const double inv = 1.0 / a.abs();
        for (cplx& c : dir) c *= inv;
        centers.push_back(std::move(dir));
    }
    // Fixed sphere sample: equal phases for n = 1, a coarse product set above.
    const std::size_t samples = 64;
    for (std::size_t k = 0; k < samples; ++k) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) /
                          static_cast<double>(samples);
        CVec c(n, cplx(0.0, 0.0));
        if (n == 1) {
            c[0] = cplx(std::cos(th), std::sin(th));
        } else {
            const double phi = std::numbers::pi * (static_cast<double>(k % 8) + 0.5) / 8.0;
            c[0] = std::cos(phi) * cplx(std::cos(th), std::sin(th));
            c[1] = std::sin(phi) * cplx(std::cos(3.0 * th), std::sin(3.0 * th));
        }
        centers.push_back(std::move(c));
    }
    return centers;
}

} // namespace

TentScan tent_scan(const PointSequence& S) {
    const AtomicMeasure chi = carleson_measure(S);
    const double n = static_cast<double>(S.dim());
    double min_gap = 1.0;
    for (const Point& a : S.points()) min_gap = std::min(min_gap, 1.0 - a.abs());
    const int K = static_cast<int>(std::ceil(std::log2(1.0 / min_gap))) + 2;

    const auto centers = tent_centers(S);
    TentScan scan;
    scan.centers = centers.size();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const auto zeta = std::span<const cplx>(centers[c]);
        for (int k = -1; k <= K; ++k) {
            const double h = std::exp2(-k);
            double mass = 0.0;
            for (std::size_t i = 0; i < S.size(); ++i) {
                if (pseudo_distance(zeta, std::span<const cplx>(S[i].coords())) < h)
                    mass += chi.masses[i];
            }
            const double ratio = mass / abs_pow(h, n);
            if (ratio > scan.constant) {
                scan.constant = ratio;
                scan.best_height = h;
                scan.best_center = c;
            }
        }
    }
    return scan;
}

double tent_constant(const PointSequence& S) { return tent_scan(S).constant; }

EmbeddingEstimate embedding_constant(const PointSequence& S, double q,
                                     const QuadratureRule& rule, std::size_t trials,
                                     std::uint64_t seed) {
    if (!(q >= 1.0) || !std::isfinite(q))
        throw std::invalid_argument("embedding_constant: q must satisfy 1 <= q < infinity");
    const std::size_t N = S.size();
    if (q == 2.0) {
        const auto G = gram_matrix_unchecked(S);
        const auto ev = hermitian_eigenvalues(G, N);
        return EmbeddingEstimate{std::sqrt(ev.back()), true};
    }

    // Lower bound: structured candidates plus random ell^q-unit coefficients.
    const QuadratureRule norm_rule = rule.adapted() ? rule : rule.with_peaks(S.points());
    std::vector<double> qnorms(N);
    for (std::size_t i = 0; i < N; ++i) qnorms[i] = kernel_norm(S[i], q, rule).norm;

    const auto synthesis_norm = [&](const std::vector<cplx>& mu) {
        double ell_q = 0.0;
        for (const cplx& m : mu) ell_q += abs_pow(m, q);
        ell_q = std::pow(ell_q, 1.0 / q);
        if (ell_q == 0.0) return 0.0;
        const double nrm = lp_norm(
            [&](std::span<const cplx> z) {
                cplx acc(0.0, 0.0);
                for (std::size_t i = 0; i < N; ++i)
                    acc += mu[i] * cauchy_kernel(S[i], z) / qnorms[i];
                return acc;
            },
            q, norm_rule);
        return nrm / ell_q;
    };

    double best = 0.0;
    std::vector<cplx> mu(N, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < N; ++i) { // spikes
        mu.assign(N, cplx(0.0, 0.0));
        mu[i] = cplx(1.0, 0.0);
        best = std::max(best, synthesis_norm(mu));
    }
    mu.assign(N, cplx(1.0, 0.0)); // all ones
    best = std::max(best, synthesis_norm(mu));
    for (std::size_t i = 0; i < N; ++i) mu[i] = cplx(i % 2 ? -1.0 : 1.0, 0.0); // alternating
    best = std::max(best, synthesis_norm(mu));
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dull + t);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& m : mu) m = cplx(gauss(rng), gauss(rng));
        best = std::max(best, synthesis_norm(mu));
    }
    return EmbeddingEstimate{best, false};
}

CrosscheckReport hormander_crosscheck(std::span<const PointSequence> family) {
    if (family.size() < 3)
        throw insufficient_data("hormander_crosscheck: need at least 3 family members, got " +
                                std::to_string(family.size()));
    CrosscheckReport rep;
    rep.series.reserve(family.size());
    for (const PointSequence& S : family) {
        CrosscheckPoint pt;
        pt.count = S.size();
        pt.tent = tent_constant(S);
        const auto G = gram_matrix_unchecked(S);
        const auto ev = hermitian_eigenvalues(G, S.size());
        pt.d2_squared = ev.back();
        pt.gram_condition = ev.front() > 0.0
                                ? ev.back() / ev.front()
                                : std::numeric_limits<double>::infinity();
        rep.series.push_back(pt);
    }
    // Log-log regression of D_2^2 against the tent constant.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(rep.series.size());
    for (const auto& pt : rep.series) {
        const double x = std::log(pt.tent);
        const double y = std::log(pt.d2_squared);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    rep.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    return rep;
}

} // namespace hardy
