#include "hardy/dual_system.hpp"

#include <cmath>

#include "hardy/kernels.hpp"
#include "hardy/linalg.hpp"

namespace hardy {

namespace {

double half_power_scale(const Point& a) {
    return abs_pow(a.one_minus_abs2(), static_cast<double>(a.dim()) / 2.0);
}

/// Fills values[i] = rho_i(z) for every i, given the normalized-basis
/// coefficient matrix X (row-major) and the basis values e_j(z).
void eval_duals(const std::vector<cplx>& X, std::span<const cplx> basis,
                std::span<cplx> values) {
    const std::size_t N = basis.size();
    for (std::size_t i = 0; i < N; ++i) {
        cplx acc(0.0, 0.0);
        const cplx* row = X.data() + i * N;
        for (std::size_t j = 0; j < N; ++j) acc += row[j] * basis[j];
        values[i] = acc;
    }
}

/// Discrete sum_nodes w |family_i|^p for a family evaluated jointly per node;
/// blocked and pairwise-folded per member, deterministic across thread counts.
template <typename Fill>
std::vector<double> family_norms_pow(const QuadratureRule& rule, std::size_t N, double p,
                                     Fill&& fill) {
    const std::size_t nblocks = (rule.size() + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks * N, 0.0);
    par_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = std::min(rule.size(), lo + kReduceBlock);
        std::vector<cplx> values(N);
        double* acc = partial.data() + b * N;
        for (std::size_t node = lo; node < hi; ++node) {
            fill(rule.node(node), values);
            const double w = rule.weight(node);
            for (std::size_t i = 0; i < N; ++i) acc[i] += w * abs_pow(values[i], p);
        }
    });
    for (std::size_t stride = 1; stride < nblocks; stride *= 2)
        for (std::size_t b = 0; b + stride < nblocks; b += 2 * stride)
            for (std::size_t i = 0; i < N; ++i)
                partial[b * N + i] += partial[(b + stride) * N + i];
    return std::vector<double>(partial.begin(), partial.begin() + N);
}

} // namespace

std::vector<cplx> gram_matrix_unchecked(const PointSequence& S) {
    const std::size_t N = S.size();
    std::vector<cplx> G(N * N);
    std::vector<double> sc(N);
    for (std::size_t i = 0; i < N; ++i) sc[i] = half_power_scale(S[i]);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            G[i * N + j] = sc[i] * sc[j] * kernel_pair(S[j], S[i]);
    return G;
}

std::vector<cplx> gram_matrix(const PointSequence& S) {
    const std::size_t N = S.size();
    auto G = gram_matrix_unchecked(S);
    const double cond = hermitian_condition(G, N);
    if (!(cond <= kGramConditionCap)) {
        const auto [i, j] = S.closest_pair();
        throw degenerate_sequence("gram_matrix: condition number " + std::to_string(cond) +
                                      " exceeds " + std::to_string(kGramConditionCap) +
                                      "; nearest pair (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ") at separation " +
                                      std::to_string(S.min_separation()),
                                  i, j);
    }
    return G;
}

std::vector<cplx> DualSystem::raw_coefficients() const {
    const std::size_t N = size();
    std::vector<cplx> raw(coeffs_);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) raw[i * N + j] *= half_power_scale(seq_[j]);
    return raw;
}

cplx DualSystem::evaluate(std::size_t i, std::span<const cplx> z) const {
    const std::size_t N = size();
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < N; ++j)
        acc += coeffs_[i * N + j] * cauchy_kernel(seq_[j], z) * half_power_scale(seq_[j]);
    return acc;
}

namespace {

/// Shared assembly: coefficients X[i][j] = t_i (G^-1)_{ji} for targets
/// rho_i(a_l) = delta_il target_i, plus the closed-form residual check.
struct Assembled {
    std::vector<cplx> X;
    double residual;
    double cond;
};

Assembled assemble(const PointSequence& S, const std::vector<double>& targets) {
    const std::size_t N = S.size();
    const auto G = gram_matrix(S);
    std::vector<cplx> identity(N * N, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < N; ++i) identity[i * N + i] = cplx(1.0, 0.0);
    const auto Ginv = hermitian_solve_refined(G, N, identity, N);

    std::vector<double> sc(N);
    for (std::size_t i = 0; i < N; ++i) sc[i] = half_power_scale(S[i]);

    Assembled out;
    out.cond = hermitian_condition(G, N);
    out.X.resize(N * N);
    for (std::size_t i = 0; i < N; ++i) {
        const double t = targets[i] * sc[i];
        for (std::size_t j = 0; j < N; ++j) out.X[i * N + j] = t * Ginv[j * N + i];
    }

    // Duality residual through the closed-form kernel values.
    double res = 0.0;
    std::vector<cplx> basis(N);
    for (std::size_t l = 0; l < N; ++l) {
        for (std::size_t j = 0; j < N; ++j) basis[j] = kernel_pair(S[j], S[l]) * sc[j];
        std::vector<cplx> values(N);
        eval_duals(out.X, basis, values);
        for (std::size_t i = 0; i < N; ++i) {
            const cplx want = i == l ? cplx(targets[i], 0.0) : cplx(0.0, 0.0);
            res = std::max(res, std::abs(values[i] - want) / targets[l]);
        }
    }
    out.residual = res;
    return out;
}

} // namespace

DualSystem dual_system_h2(const PointSequence& S) {
    const std::size_t N = S.size();
    const double n = static_cast<double>(S.dim());
    std::vector<double> targets(N);
    for (std::size_t i = 0; i < N; ++i)
        targets[i] = abs_pow(S[i].one_minus_abs2(), -n / 2.0);
    auto asm2 = assemble(S, targets);

    DualSystem ds(S, 2.0);
    ds.coeffs_ = std::move(asm2.X);
    ds.targets_ = std::move(targets);
    ds.residual_ = asm2.residual;
    ds.gram_condition_ = asm2.cond;
    // ||rho_i||_2^2 = (G^-1)_ii, read off the assembled coefficients:
    // X[i][i] = t_i sc_i (G^-1)_ii with t_i sc_i = 1 for the 2-system.
    ds.norms_.resize(N);
    for (std::size_t i = 0; i < N; ++i)
        ds.norms_[i] = std::sqrt(std::abs(ds.coeffs_[i * N + i]));
    return ds;
}

DualSystem dual_system_hp(const PointSequence& S, double p, const QuadratureRule& rule) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("dual_system_hp: p must satisfy 1 <= p < infinity");
    if (rule.dim() != S.dim()) throw dimension_mismatch(rule.dim(), S.dim());
    const std::size_t N = S.size();
    const double n = static_cast<double>(S.dim());
    const double pconj = p / (p - 1.0); // +inf at p = 1

    std::vector<double> targets(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (p == 1.0) {
            // ||k_a||_inf = (1 - |a|)^(-n) at z = a/|a|.
            targets[i] = abs_pow(1.0 - S[i].abs(), -n);
        } else if (pconj == 2.0) {
            targets[i] = abs_pow(S[i].one_minus_abs2(), -n / 2.0);
        } else {
            targets[i] = kernel_norm(S[i], pconj, rule).norm;
        }
    }
    auto asmp = assemble(S, targets);

    DualSystem ds(S, p);
    ds.coeffs_ = std::move(asmp.X);
    ds.targets_ = std::move(targets);
    ds.residual_ = asmp.residual;
    ds.gram_condition_ = asmp.cond;
    ds.norm_rule_ = std::make_shared<QuadratureRule>(
        rule.adapted() ? rule : rule.with_peaks(S.points()));

    std::vector<double> sc(N);
    for (std::size_t i = 0; i < N; ++i) sc[i] = half_power_scale(S[i]);
    auto pow_p = family_norms_pow(*ds.norm_rule_, N, p,
                                  [&](std::span<const cplx> z, std::span<cplx> values) {
                                      std::vector<cplx> basis(N);
                                      for (std::size_t j = 0; j < N; ++j)
                                          basis[j] = cauchy_kernel(S[j], z) * sc[j];
                                      eval_duals(ds.coeffs_, basis, values);
                                  });
    ds.norms_.resize(N);
    for (std::size_t i = 0; i < N; ++i) ds.norms_[i] = std::pow(pow_p[i], 1.0 / p);
    return ds;
}

double dual_bound_constant(const DualSystem& ds) {
    double best = 0.0;
    for (const double v : ds.norms()) best = std::max(best, v);
    return best;
}

ProductSystemReport h1_product_check(const DualSystem& ds) {
    if (!ds.norm_rule_ptr())
        throw std::invalid_argument("h1_product_check: dual system carries no norm rule");
    const PointSequence& S = ds.sequence();
    const std::size_t N = S.size();
    const double n = static_cast<double>(S.dim());
    const QuadratureRule& rule = ds.norm_rule();

    std::vector<double> sc(N);
    for (std::size_t i = 0; i < N; ++i) sc[i] = half_power_scale(S[i]);
    // rho_{i,1} = rho_i k_{a_i, p'} with the same targets table the system used.
    auto pow_1 = family_norms_pow(rule, N, 1.0,
                                  [&](std::span<const cplx> z, std::span<cplx> values) {
                                      std::vector<cplx> basis(N);
                                      for (std::size_t j = 0; j < N; ++j)
                                          basis[j] = cauchy_kernel(S[j], z) * sc[j];
                                      eval_duals(ds.coefficients(), basis, values);
                                      for (std::size_t i = 0; i < N; ++i)
                                          values[i] *= basis[i] / (sc[i] * ds.targets()[i]);
                                  });

    ProductSystemReport rep;
    for (std::size_t i = 0; i < N; ++i)
        rep.max_norm_excess = std::max(rep.max_norm_excess, pow_1[i] / ds.norms()[i] - 1.0);

    for (std::size_t l = 0; l < N; ++l) {
        const auto zl = std::span<const cplx>(S[l].coords());
        for (std::size_t i = 0; i < N; ++i) {
            const cplx val =
                ds.evaluate(i, zl) * cauchy_kernel(S[i], zl) / ds.targets()[i];
            const double diag = abs_pow(S[i].one_minus_abs2(), -n);
            const cplx want = i == l ? cplx(diag, 0.0) : cplx(0.0, 0.0);
            rep.max_value_violation =
                std::max(rep.max_value_violation, std::abs(val - want) / diag);
        }
    }
    rep.pass = rep.max_norm_excess <= 1e-6 && rep.max_value_violation <= 1e-8;
    return rep;
}

} // namespace hardy
