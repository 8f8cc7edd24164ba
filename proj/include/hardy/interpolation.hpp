#ifndef HARDY_INTERPOLATION_HPP
#define HARDY_INTERPOLATION_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "hardy/dual_system.hpp"
#include "hardy/kernels.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/sequences.hpp"

namespace hardy {

/// 1/x + 1/x' = 1; x = 1 maps to +infinity.
double conjugate_exponent(double x);

/// The split 1/s = 1/p + 1/q with all conjugates. q is computed, never
/// supplied. holder_admissible records q/p' > 1, which the envelope/balayage
/// pipeline requires; constructing the split never fails for 1 <= s < p, the
/// admissibility gate sits on the operations that need it.
struct ExponentSystem {
    double s = 2.0, p = 4.0, q = 4.0;
    double s_conj = 2.0, p_conj = 4.0 / 3.0, q_conj = 4.0 / 3.0;
    double q_over_p_conj = 3.0;
    bool holder_admissible = true;
};
ExponentSystem exponent_split(double s, double p);

/// Entrywise factorization target = lp_part * lq_part with
/// lp_part_a = phase(target_a) |target_a|^(s/p), lq_part_a = |target_a|^(s/q),
/// and the zero convention 0 -> (0, 0). Norms satisfy
/// ||target||_s = ||lp_part||_p ||lq_part||_q exactly.
struct TargetFactors {
    std::vector<cplx> lp_part;
    std::vector<double> lq_part;
    double target_norm = 0.0;
    double lp_norm = 0.0;
    double lq_norm = 0.0;
};
TargetFactors factor_target(std::span<const cplx> target, const ExponentSystem& es);

/// Per-sequence kernel norms on consistent rules: exponent 2 from the
/// reproducing closed form, every other exponent by quadrature with the rule
/// pulled toward the pole. One table feeds every formula downstream, so the
/// normalization constants cancel exactly where the algebra says they should.
class KernelNormTable {
public:
    KernelNormTable(const PointSequence& S, const QuadratureRule& base,
                    std::span<const double> exponents);
    double norm(std::size_t point, double exponent) const;
    double constant(std::size_t point, double exponent) const; // c(a, x)
    std::size_t size() const { return count_; }

private:
    std::size_t count_;
    double dim_n_ = 1.0;
    std::vector<double> oms_; // 1 - |a|^2 per point
    std::map<double, std::vector<double>> norms_;
};

/// Calibration constant c(a,q) c(a,s') / (c(a,p') c(a,2)^2); bounded above and
/// below over any radius grid.
double calibration_constant(const Point& a, const ExponentSystem& es,
                            const QuadratureRule& rule, const NormBand& band = {});

/// Everything the extension operator needs, precomputed per (S, dual system,
/// exponents): per-node dual values and normalized q-kernels on the dual
/// system's norm rule, the calibration constants, and the norm table.
class ExtensionWorkspace {
public:
    /// `base` must be the same plain rule the dual system was built from, so
    /// the norm table reproduces the system's targets bit for bit.
    ExtensionWorkspace(const DualSystem& ds, const ExponentSystem& es,
                       const QuadratureRule& base);

    const DualSystem& dual() const { return *ds_; }
    const ExponentSystem& exponents() const { return es_; }
    const QuadratureRule& rule() const { return ds_->norm_rule(); }
    const KernelNormTable& table() const { return *table_; }
    double calibration(std::size_t i) const { return gammas_[i]; }
    double max_calibration() const { return gamma_max_; }

    /// rho_a(node_i) and k_{a,q}(node_i), node-major N-wide rows.
    const std::vector<cplx>& dual_values() const { return rho_values_; }
    const std::vector<cplx>& qkernel_values() const { return kq_values_; }

private:
    const DualSystem* ds_;
    ExponentSystem es_;
    std::unique_ptr<KernelNormTable> table_;
    std::vector<double> gammas_;
    double gamma_max_ = 0.0;
    std::vector<cplx> rho_values_, kq_values_;
};

/// The linear extension h = sum_a target_a gamma_a rho_a k_{a,q}, evaluated
/// through closed forms; quadrature only touches the norms.
struct ExtensionResult {
    std::vector<cplx> achieved;   // h(b) per b in S
    std::vector<cplx> wanted;     // target_b ||k_b||_{s'}
    double residual = 0.0;        // max relative interpolation error
    double h_norm = 0.0;          // ||h||_s
    double target_norm = 0.0;     // ||target||_s
    double ratio = 0.0;           // h_norm / target_norm
    std::vector<cplx> node_values; // h at the rule nodes (reused by the checks)
};
ExtensionResult build_extension(const ExtensionWorkspace& ws, std::span<const cplx> target);

/// h at an arbitrary point of the closed ball.
cplx evaluate_extension(const ExtensionWorkspace& ws, std::span<const cplx> target,
                        std::span<const cplx> z);

/// Empirical interpolation constant: max of ||h||_s / ||target||_s over all
/// basis spikes plus `trials` random unit targets. A lower bound on the
/// operator norm of the extension map.
double interpolation_constant(const ExtensionWorkspace& ws, std::size_t trials,
                              std::uint64_t seed = 11);

/// The envelope bound behind the norm estimate: g from the dual system,
/// f from the q-kernels, |h| <= gamma_max * g * f^(1/p') pointwise.
struct EnvelopeReport {
    double g_norm_pow = 0.0;        // ||g||_p^p by quadrature
    double g_identity = 0.0;        // sum_a |lp_a|^p ||rho_a||_p^p
    double g_identity_rel_err = 0.0;
    double pointwise_margin = 0.0;  // max over nodes of |h| - bound (<= slack)
    double f_norm = 0.0;            // ||f||_{q/p'}
    double f_ratio = 0.0;           // ||f||_{q/p'} / ||lq||_q^{p'}
    bool pass = false;
};
EnvelopeReport holder_pipeline_check(const ExtensionWorkspace& ws, std::span<const cplx> target);

/// Discrete balayage identity: integrating |density|^(q/p') against the
/// sequence measure chi reproduces sum |lq_a|^q exactly.
struct BalayageReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
};
BalayageReport balayage_identity_check(const PointSequence& S, std::span<const double> lq_part,
                                       const ExponentSystem& es);

} // namespace hardy

#endif
