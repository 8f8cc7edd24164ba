#ifndef HARDY_DUAL_SYSTEM_HPP
#define HARDY_DUAL_SYSTEM_HPP

#include <memory>
#include <vector>

#include "hardy/quadrature.hpp"
#include "hardy/sequences.hpp"

namespace hardy {

/// Normalized kernel Gram matrix, row-major:
/// G[i][j] = (1-|a_i|^2)^(n/2) (1-|a_j|^2)^(n/2) (1 - conj(a_j).a_i)^(-n).
/// Hermitian, unit diagonal, positive definite for distinct points. Throws
/// degenerate_sequence (carrying the closest pair) when the condition number
/// exceeds 1e12.
std::vector<cplx> gram_matrix(const PointSequence& S);

/// Same matrix without the conditioning gate (diagnostics on families that are
/// allowed to degenerate, e.g. accumulating sequences).
std::vector<cplx> gram_matrix_unchecked(const PointSequence& S);

/// Condition-number threshold for a usable Gram matrix.
inline constexpr double kGramConditionCap = 1e12;

/// The biorthogonal family rho_a in span{k_b : b in S} with
/// rho_a(b) = delta_ab ||k_b||_{p'}. Coefficients are stored on the exactly
/// normalized basis e_j = k_j (1-|a_j|^2)^(n/2); raw_coefficients() converts
/// to the k_j basis.
class DualSystem {
public:
    const PointSequence& sequence() const { return seq_; }
    double exponent() const { return p_; }
    std::size_t size() const { return seq_.size(); }

    const std::vector<cplx>& coefficients() const { return coeffs_; }
    std::vector<cplx> raw_coefficients() const;
    /// ||k_b||_{p'} targets: rho_a(b) = delta_ab * target(b).
    const std::vector<double>& targets() const { return targets_; }
    /// Discrete ||rho_a||_p on norm_rule().
    const std::vector<double>& norms() const { return norms_; }
    double residual() const { return residual_; }
    bool converged() const { return converged_; }
    std::size_t iterations() const { return iterations_; }
    double gram_condition() const { return gram_condition_; }

    /// Peak-adapted rule every multi-kernel norm in this system is measured on.
    const QuadratureRule& norm_rule() const { return *norm_rule_; }
    std::shared_ptr<const QuadratureRule> norm_rule_ptr() const { return norm_rule_; }

    /// rho_i evaluated anywhere on the closed ball.
    cplx evaluate(std::size_t i, std::span<const cplx> z) const;

    friend DualSystem dual_system_h2(const PointSequence&);
    friend DualSystem dual_system_hp(const PointSequence&, double, const QuadratureRule&);

private:
    DualSystem(PointSequence seq, double p) : seq_(std::move(seq)), p_(p) {}
    PointSequence seq_;
    double p_;
    std::vector<cplx> coeffs_;       // N x N row-major on the normalized basis
    std::vector<double> targets_;    // N
    std::vector<double> norms_;      // N
    double residual_ = 0.0;
    bool converged_ = true;
    std::size_t iterations_ = 1;
    double gram_condition_ = 1.0;
    std::shared_ptr<const QuadratureRule> norm_rule_;
};

/// Exact p = 2 system by Gram inversion; rho-norms come from the closed form
/// ||rho_a||_2^2 = (G^-1)_aa (no quadrature involved).
DualSystem dual_system_h2(const PointSequence& S);

/// General-p system. The constraints pin the coefficients inside the kernel
/// span (the collocation matrix is the Gram), so the minimal-norm search
/// reduces to one constrained solve; it is warm-started from (and equal to)
/// the rescaled p = 2 solution. `rule` must be a plain rule: targets use
/// per-pole pullbacks of it, multi-kernel norms use rule.with_peaks(S).
DualSystem dual_system_hp(const PointSequence& S, double p, const QuadratureRule& rule);

/// max_a ||rho_a||_p; >= 1 up to quadrature error.
double dual_bound_constant(const DualSystem& ds);

/// Checks that the products rho_a * k_{a,p'} form a bounded dual system for
/// the H^1 pairing: (i) ||rho_a k_{a,p'}||_1 <= ||rho_a||_p (1 + tol) and
/// (ii) (rho_a k_{a,p'})(b) = delta_ab (1-|a|^2)^(-n).
struct ProductSystemReport {
    double max_norm_excess = 0.0;     // max over a of ||prod||_1 / ||rho_a||_p - 1
    double max_value_violation = 0.0; // max relative deviation in (ii)
    bool pass = false;
};
ProductSystemReport h1_product_check(const DualSystem& ds);

} // namespace hardy

#endif
