#include "hardy/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hardy {

namespace {

double norm2(const CVec& v) {
    double s = 0.0;
    for (const cplx& c : v) s += std::norm(c);
    return s;
}

} // namespace

Point::Point(CVec coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("Point: dimension must be >= 1");
    abs2_ = norm2(coords_);
    const double r = std::sqrt(abs2_);
    if (r >= 1.0 - 1e-12)
        throw std::invalid_argument("Point: |a| = " + std::to_string(r) +
                                    " is not strictly inside the unit ball");
}

Point Point::origin(std::size_t n) { return Point(CVec(n, cplx(0.0, 0.0))); }

double Point::abs() const { return std::sqrt(abs2_); }

BoundaryPoint::BoundaryPoint(CVec coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("BoundaryPoint: dimension must be >= 1");
    const double r = std::sqrt(norm2(coords_));
    if (std::abs(r - 1.0) > 1e-8)
        throw std::invalid_argument("BoundaryPoint: |z| = " + std::to_string(r) +
                                    " is too far from the unit sphere to renormalize");
    const double inv = 1.0 / r;
    for (cplx& c : coords_) c *= inv;
}

cplx hermitian_inner(std::span<const cplx> w, std::span<const cplx> z) {
    if (w.size() != z.size()) throw dimension_mismatch(w.size(), z.size());
    cplx s(0.0, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) s += std::conj(w[j]) * z[j];
    return s;
}

double pseudo_distance(std::span<const cplx> w, std::span<const cplx> z) {
    return std::abs(cplx(1.0, 0.0) - hermitian_inner(w, z));
}

double boundary_metric(const BoundaryPoint& w, const BoundaryPoint& z) {
    return std::sqrt(pseudo_distance(w, z));
}

QuasiTriangleScan quasi_triangle_ratio(std::span<const BoundaryTriple> samples) {
    if (samples.empty())
        throw empty_sample_error("quasi_triangle_ratio: no triples supplied");
    QuasiTriangleScan scan;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [a, b, c] = samples[i];
        const double denom = pseudo_distance(a, c) + pseudo_distance(c, b);
        if (denom == 0.0) {
            ++scan.skipped;
            continue;
        }
        const double ratio = pseudo_distance(a, b) / denom;
        if (scan.used == 0 || ratio > scan.max_ratio) {
            scan.max_ratio = ratio;
            scan.argmax = i;
        }
        ++scan.used;
    }
    if (scan.used == 0)
        throw empty_sample_error("quasi_triangle_ratio: every triple had a zero denominator");
    return scan;
}

} // namespace hardy
