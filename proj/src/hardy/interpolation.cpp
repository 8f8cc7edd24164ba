#include "hardy/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hardy {

double conjugate_exponent(double x) {
    if (!(x >= 1.0)) throw std::invalid_argument("conjugate_exponent: x must be >= 1");
    if (x == 1.0) return std::numeric_limits<double>::infinity();
    return x / (x - 1.0);
}

ExponentSystem exponent_split(double s, double p) {
    if (!(s >= 1.0) || !std::isfinite(s))
        throw std::invalid_argument("exponent_split: s must satisfy 1 <= s < infinity");
    if (!(p > s) || !std::isfinite(p))
        throw std::invalid_argument("exponent_split: need s < p < infinity");
    ExponentSystem es;
    es.s = s;
    es.p = p;
    es.q = 1.0 / (1.0 / s - 1.0 / p);
    es.s_conj = conjugate_exponent(s);
    es.p_conj = conjugate_exponent(p);
    es.q_conj = conjugate_exponent(es.q);
    es.q_over_p_conj = es.q / es.p_conj;
    es.holder_admissible = es.q_over_p_conj > 1.0;
    return es;
}

TargetFactors factor_target(std::span<const cplx> target, const ExponentSystem& es) {
    TargetFactors f;
    f.lp_part.resize(target.size());
    f.lq_part.resize(target.size());
    double sum_s = 0.0, sum_p = 0.0, sum_q = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double r = std::abs(target[i]);
        if (r == 0.0) {
            f.lp_part[i] = cplx(0.0, 0.0);
            f.lq_part[i] = 0.0;
            continue;
        }
        const double rp = std::pow(r, es.s / es.p);
        const double rq = std::pow(r, es.s / es.q);
        f.lp_part[i] = target[i] * (rp / r);
        f.lq_part[i] = rq;
        sum_s += abs_pow(r, es.s);
        sum_p += abs_pow(rp, es.p);
        sum_q += abs_pow(rq, es.q);
    }
    f.target_norm = std::pow(sum_s, 1.0 / es.s);
    f.lp_norm = std::pow(sum_p, 1.0 / es.p);
    f.lq_norm = std::pow(sum_q, 1.0 / es.q);
    return f;
}

namespace {

double n_over_conj(double n, double x) { return n * (x - 1.0) / x; }

} // namespace

KernelNormTable::KernelNormTable(const PointSequence& S, const QuadratureRule& base,
                                 std::span<const double> exponents)
    : count_(S.size()), dim_n_(static_cast<double>(S.dim())) {
    const double n = dim_n_;
    oms_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) oms_[i] = S[i].one_minus_abs2();
    std::vector<double> exps(exponents.begin(), exponents.end());
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
    for (const double x : exps) {
        if (!(x >= 1.0) || !std::isfinite(x))
            throw std::invalid_argument("KernelNormTable: exponents must be finite and >= 1");
        norms_[x] = std::vector<double>(count_);
    }
    for (std::size_t i = 0; i < count_; ++i) {
        const QuadratureRule* r = &base;
        QuadratureRule pulled;
        if (S[i].abs() >= 0.1 && !base.adapted()) {
            pulled = base.pulled_toward(S[i]);
            r = &pulled;
        }
        for (const double x : exps) {
            if (x == 2.0) {
                // Reproducing identity; keeps c(a,2) = 1 identically.
                norms_[x][i] = abs_pow(oms_[i], -n / 2.0);
            } else {
                const Point& a = S[i];
                norms_[x][i] = lp_norm(
                    [&](std::span<const cplx> z) { return cauchy_kernel(a, z); }, x, *r);
            }
        }
    }
}

double KernelNormTable::norm(std::size_t point, double exponent) const {
    const auto it = norms_.find(exponent);
    if (it == norms_.end())
        throw std::invalid_argument("KernelNormTable: exponent not tabulated");
    return it->second[point];
}

double KernelNormTable::constant(std::size_t point, double exponent) const {
    // c(a, x) = ||k_a||_x (1 - |a|^2)^(n/x')
    return norm(point, exponent) * abs_pow(oms_[point], n_over_conj(dim_n_, exponent));
}

double calibration_constant(const Point& a, const ExponentSystem& es,
                            const QuadratureRule& rule, const NormBand& band) {
    if (!es.holder_admissible)
        throw std::invalid_argument(
            "calibration_constant: exponent system is not admissible (q/p' <= 1)");
    const auto cq = kernel_norm(a, es.q, rule, band).c;
    const auto cs = kernel_norm(a, es.s_conj, rule, band).c;
    const auto cp = kernel_norm(a, es.p_conj, rule, band).c;
    const auto c2 = kernel_norm(a, 2.0, rule, band).c;
    return cq * cs / (cp * c2 * c2);
}

ExtensionWorkspace::ExtensionWorkspace(const DualSystem& ds, const ExponentSystem& es,
                                       const QuadratureRule& base)
    : ds_(&ds), es_(es) {
    if (!es.holder_admissible)
        throw std::invalid_argument("ExtensionWorkspace: q/p' <= 1; the exponent split is "
                                    "outside the admissible range");
    if (std::abs(ds.exponent() - es.p) > 1e-12)
        throw std::invalid_argument("ExtensionWorkspace: dual system exponent " +
                                    std::to_string(ds.exponent()) +
                                    " does not match the split's p = " + std::to_string(es.p));
    if (!ds.norm_rule_ptr())
        throw std::invalid_argument("ExtensionWorkspace: dual system carries no norm rule; "
                                    "build it with dual_system_hp");
    const PointSequence& S = ds.sequence();
    const double n = static_cast<double>(S.dim());
    const double exps[] = {2.0, es.s, es.p, es.q, es.s_conj, es.p_conj, es.q_conj};
    table_ = std::make_unique<KernelNormTable>(S, base, std::span<const double>(exps, 7));

    const std::size_t N = S.size();
    gammas_.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double om = S[i].one_minus_abs2();
        const auto c = [&](double x) {
            return table_->norm(i, x) * abs_pow(om, n_over_conj(n, x));
        };
        gammas_[i] = c(es.q) * c(es.s_conj) / (c(es.p_conj) * c(2.0) * c(2.0));
    }
    gamma_max_ = *std::max_element(gammas_.begin(), gammas_.end());

    const QuadratureRule& rule = ds.norm_rule();
    const std::size_t M = rule.size();
    rho_values_.resize(M * N);
    kq_values_.resize(M * N);
    std::vector<double> sc(N), qn(N);
    for (std::size_t j = 0; j < N; ++j) {
        sc[j] = abs_pow(S[j].one_minus_abs2(), n / 2.0);
        qn[j] = table_->norm(j, es.q);
    }
    const auto& X = ds.coefficients();
    par_for(M, [&](std::size_t m) {
        std::vector<cplx> basis(N);
        const auto z = rule.node(m);
        for (std::size_t j = 0; j < N; ++j) basis[j] = cauchy_kernel(S[j], z) * sc[j];
        for (std::size_t i = 0; i < N; ++i) {
            cplx acc(0.0, 0.0);
            const cplx* row = X.data() + i * N;
            for (std::size_t j = 0; j < N; ++j) acc += row[j] * basis[j];
            rho_values_[m * N + i] = acc;
            kq_values_[m * N + i] = basis[i] / (sc[i] * qn[i]);
        }
    });
}

namespace {

void check_target_size(const ExtensionWorkspace& ws, std::span<const cplx> target) {
    if (target.size() != ws.dual().size())
        throw std::invalid_argument("extension: target length " +
                                    std::to_string(target.size()) +
                                    " does not match the sequence length " +
                                    std::to_string(ws.dual().size()));
}

} // namespace

cplx evaluate_extension(const ExtensionWorkspace& ws, std::span<const cplx> target,
                        std::span<const cplx> z) {
    check_target_size(ws, target);
    const DualSystem& ds = ws.dual();
    const PointSequence& S = ds.sequence();
    const std::size_t N = S.size();
    cplx acc(0.0, 0.0);
    for (std::size_t a = 0; a < N; ++a) {
        if (target[a] == cplx(0.0, 0.0)) continue;
        const cplx kq = cauchy_kernel(S[a], z) / ws.table().norm(a, ws.exponents().q);
        acc += target[a] * ws.calibration(a) * ds.evaluate(a, z) * kq;
    }
    return acc;
}

ExtensionResult build_extension(const ExtensionWorkspace& ws, std::span<const cplx> target) {
    check_target_size(ws, target);
    const DualSystem& ds = ws.dual();
    const PointSequence& S = ds.sequence();
    const ExponentSystem& es = ws.exponents();
    const std::size_t N = S.size();

    ExtensionResult res;
    res.achieved.resize(N);
    res.wanted.resize(N);
    double max_rel = 0.0;
    for (std::size_t b = 0; b < N; ++b) {
        const auto zb = std::span<const cplx>(S[b].coords());
        res.achieved[b] = evaluate_extension(ws, target, zb);
        res.wanted[b] = target[b] * ws.table().norm(b, es.s_conj);
        const double guard = std::abs(res.wanted[b]) + 1e-30;
        max_rel = std::max(max_rel, std::abs(res.achieved[b] - res.wanted[b]) / guard);
    }
    res.residual = max_rel;

    const QuadratureRule& rule = ds.norm_rule();
    const std::size_t M = rule.size();
    std::vector<cplx> weights(N);
    for (std::size_t a = 0; a < N; ++a) weights[a] = target[a] * ws.calibration(a);
    res.node_values.resize(M);
    const auto& rho = ws.dual_values();
    const auto& kq = ws.qkernel_values();
    par_for(M, [&](std::size_t m) {
        cplx acc(0.0, 0.0);
        for (std::size_t a = 0; a < N; ++a) acc += weights[a] * rho[m * N + a] * kq[m * N + a];
        res.node_values[m] = acc;
    });
    const double pow_s = block_sum(M, [&](std::size_t m) {
        return rule.weight(m) * abs_pow(res.node_values[m], es.s);
    });
    res.h_norm = std::pow(pow_s, 1.0 / es.s);
    double sum_s = 0.0;
    for (const cplx& v : target) sum_s += abs_pow(v, es.s);
    res.target_norm = std::pow(sum_s, 1.0 / es.s);
    res.ratio = res.target_norm > 0.0 ? res.h_norm / res.target_norm : 0.0;
    return res;
}

double interpolation_constant(const ExtensionWorkspace& ws, std::size_t trials,
                              std::uint64_t seed) {
    const std::size_t N = ws.dual().size();
    double best = 0.0;
    std::vector<cplx> target(N, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        target.assign(N, cplx(0.0, 0.0));
        target[i] = cplx(1.0, 0.0);
        best = std::max(best, build_extension(ws, target).ratio);
    }
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + t);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double sum_s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            target[i] = cplx(gauss(rng), gauss(rng));
            sum_s += abs_pow(target[i], ws.exponents().s);
        }
        const double scale = 1.0 / std::pow(sum_s, 1.0 / ws.exponents().s);
        for (auto& v : target) v *= scale;
        best = std::max(best, build_extension(ws, target).ratio);
    }
    return best;
}

EnvelopeReport holder_pipeline_check(const ExtensionWorkspace& ws,
                                     std::span<const cplx> target) {
    check_target_size(ws, target);
    const ExponentSystem& es = ws.exponents();
    const TargetFactors factors = factor_target(target, es);
    const DualSystem& ds = ws.dual();
    const QuadratureRule& rule = ds.norm_rule();
    const std::size_t M = rule.size();
    const std::size_t N = ds.size();
    const auto& rho = ws.dual_values();
    const auto& kq = ws.qkernel_values();

    std::vector<double> lp_abs_p(N), lq_abs_pc(N);
    std::vector<cplx> weights(N);
    for (std::size_t a = 0; a < N; ++a) {
        lp_abs_p[a] = abs_pow(factors.lp_part[a], es.p);
        lq_abs_pc[a] = abs_pow(factors.lq_part[a], es.p_conj);
        weights[a] = target[a] * ws.calibration(a);
    }

    // One sweep: ||g||_p^p, per-a |rho_a|_p^p masses, ||f||_{q/p'}^{q/p'}, and
    // the worst pointwise Hoelder margin.
    const std::size_t nblocks = (M + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> blk_g(nblocks, 0.0), blk_f(nblocks, 0.0), blk_margin(nblocks, 0.0);
    std::vector<double> blk_rho(nblocks * N, 0.0);
    par_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = std::min(M, lo + kReduceBlock);
        double acc_g = 0.0, acc_f = 0.0, margin = -std::numeric_limits<double>::infinity();
        double* acc_rho = blk_rho.data() + b * N;
        for (std::size_t m = lo; m < hi; ++m) {
            const double w = rule.weight(m);
            double gp = 0.0, fv = 0.0;
            cplx h(0.0, 0.0);
            for (std::size_t a = 0; a < N; ++a) {
                const double rp = abs_pow(rho[m * N + a], es.p);
                gp += lp_abs_p[a] * rp;
                acc_rho[a] += w * rp;
                fv += lq_abs_pc[a] * abs_pow(kq[m * N + a], es.p_conj);
                h += weights[a] * rho[m * N + a] * kq[m * N + a];
            }
            acc_g += w * gp;
            acc_f += w * abs_pow(fv, es.q_over_p_conj);
            const double bound = ws.max_calibration() * std::pow(gp, 1.0 / es.p) *
                                 abs_pow(fv, 1.0 / es.p_conj);
            margin = std::max(margin, (std::abs(h) - bound) / (bound + 1e-300));
        }
        blk_g[b] = acc_g;
        blk_f[b] = acc_f;
        blk_margin[b] = margin;
    });

    EnvelopeReport rep;
    for (std::size_t stride = 1; stride < nblocks; stride *= 2)
        for (std::size_t b = 0; b + stride < nblocks; b += 2 * stride) {
            blk_g[b] += blk_g[b + stride];
            blk_f[b] += blk_f[b + stride];
            blk_margin[b] = std::max(blk_margin[b], blk_margin[b + stride]);
            for (std::size_t a = 0; a < N; ++a)
                blk_rho[b * N + a] += blk_rho[(b + stride) * N + a];
        }
    rep.g_norm_pow = nblocks ? blk_g[0] : 0.0;
    rep.pointwise_margin = nblocks ? blk_margin[0] : 0.0;
    double identity = 0.0;
    for (std::size_t a = 0; a < N; ++a) identity += lp_abs_p[a] * blk_rho[a];
    rep.g_identity = identity;
    const double denom = std::max(rep.g_norm_pow, identity) + 1e-300;
    rep.g_identity_rel_err = std::abs(rep.g_norm_pow - identity) / denom;
    const double f_pow = nblocks ? blk_f[0] : 0.0;
    rep.f_norm = std::pow(f_pow, 1.0 / es.q_over_p_conj);
    const double mu_q = abs_pow(factors.lq_norm, es.p_conj);
    rep.f_ratio = mu_q > 0.0 ? rep.f_norm / mu_q : 0.0;
    rep.pass = rep.g_identity_rel_err <= 1e-10 && rep.pointwise_margin <= 1e-12 &&
               std::isfinite(rep.f_norm);
    return rep;
}

BalayageReport balayage_identity_check(const PointSequence& S, std::span<const double> lq_part,
                                       const ExponentSystem& es) {
    if (lq_part.size() != S.size())
        throw std::invalid_argument("balayage_identity_check: factor length " +
                                    std::to_string(lq_part.size()) +
                                    " does not match the sequence length " +
                                    std::to_string(S.size()));
    if (!es.holder_admissible)
        throw std::invalid_argument("balayage_identity_check: q/p' <= 1");
    const double n = static_cast<double>(S.dim());
    BalayageReport rep;
    for (std::size_t a = 0; a < S.size(); ++a) {
        const double om = S[a].one_minus_abs2();
        const double mass = abs_pow(om, n);
        const double density =
            abs_pow(lq_part[a], es.p_conj) * std::pow(om, -n * es.p_conj / es.q);
        rep.lhs += mass * abs_pow(density, es.q_over_p_conj);
        rep.rhs += abs_pow(lq_part[a], es.q);
    }
    rep.rel_err = std::abs(rep.lhs - rep.rhs) / (std::max(rep.lhs, rep.rhs) + 1e-300);
    return rep;
}

} // namespace hardy
