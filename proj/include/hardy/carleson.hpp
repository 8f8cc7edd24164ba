#ifndef HARDY_CARLESON_HPP
#define HARDY_CARLESON_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "hardy/quadrature.hpp"
#include "hardy/sequences.hpp"

namespace hardy {

/// chi = sum_a (1-|a|^2)^n delta_a.
struct AtomicMeasure {
    std::vector<Point> atoms;
    std::vector<double> masses;
    double total = 0.0;
};
AtomicMeasure carleson_measure(const PointSequence& S);

/// Geometric tent constant sup chi(T(zeta, h)) / h^n over centers drawn from
/// the sequence directions plus a fixed sphere sample, and dyadic heights
/// h in {2, 1, 1/2, ..., 2^-K}, K = ceil(log2(1 / min_a(1-|a|))) + 2.
struct TentScan {
    double constant = 0.0;
    double best_height = 0.0;
    std::size_t best_center = 0; // index into the scanned center list
    std::size_t centers = 0;
};
TentScan tent_scan(const PointSequence& S);
double tent_constant(const PointSequence& S);

/// D_q of the synthesis map mu -> sum mu_a k_{a,q}. Exact for q = 2 (largest
/// singular value of the normalized Gram factor); a randomized lower bound
/// otherwise.
struct EmbeddingEstimate {
    double value = 1.0; // D_q
    bool exact = false;
};
EmbeddingEstimate embedding_constant(const PointSequence& S, double q,
                                     const QuadratureRule& rule, std::size_t trials,
                                     std::uint64_t seed = 7);

/// Tent constant vs D_2^2 across a growing family of sequences from one
/// generator; both must be finite, and the log-log regression slope of one
/// against the other is reported.
struct CrosscheckPoint {
    std::size_t count = 0;
    double tent = 0.0;
    double d2_squared = 0.0;
    double gram_condition = 0.0;
};
struct CrosscheckReport {
    std::vector<CrosscheckPoint> series;
    double slope = 0.0;
};
CrosscheckReport hormander_crosscheck(std::span<const PointSequence> family);

} // namespace hardy

#endif
