#ifndef HARDY_GEOMETRY_HPP
#define HARDY_GEOMETRY_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// A point of the open unit ball of C^n, strictly inside: |a| < 1 - 1e-12.
class Point {
public:
    explicit Point(CVec coords);
    Point(std::initializer_list<cplx> coords) : Point(CVec(coords)) {}
    static Point origin(std::size_t n);

    const CVec& coords() const { return coords_; }
    std::size_t dim() const { return coords_.size(); }
    double abs2() const { return abs2_; }
    double abs() const;
    /// 1 - |a|^2, the boundary gap every kernel formula is built from.
    double one_minus_abs2() const { return 1.0 - abs2_; }

private:
    CVec coords_;
    double abs2_;
};

/// A point of the unit sphere of C^n. Construction renormalizes small drift
/// (|norm - 1| <= 1e-8) and rejects anything farther from the sphere.
class BoundaryPoint {
public:
    explicit BoundaryPoint(CVec coords);
    BoundaryPoint(std::initializer_list<cplx> coords) : BoundaryPoint(CVec(coords)) {}

    const CVec& coords() const { return coords_; }
    std::size_t dim() const { return coords_.size(); }

private:
    CVec coords_;
};

/// Hermitian pairing conj(w) . z, conjugating the FIRST argument.
cplx hermitian_inner(std::span<const cplx> w, std::span<const cplx> z);
inline cplx hermitian_inner(const Point& w, const Point& z) {
    return hermitian_inner(std::span<const cplx>(w.coords()), std::span<const cplx>(z.coords()));
}
inline cplx hermitian_inner(const Point& w, const BoundaryPoint& z) {
    return hermitian_inner(std::span<const cplx>(w.coords()), std::span<const cplx>(z.coords()));
}
inline cplx hermitian_inner(const BoundaryPoint& w, const Point& z) {
    return hermitian_inner(std::span<const cplx>(w.coords()), std::span<const cplx>(z.coords()));
}
inline cplx hermitian_inner(const BoundaryPoint& w, const BoundaryPoint& z) {
    return hermitian_inner(std::span<const cplx>(w.coords()), std::span<const cplx>(z.coords()));
}

/// delta(w, z) = |1 - conj(w) . z|.
double pseudo_distance(std::span<const cplx> w, std::span<const cplx> z);
template <typename A, typename B>
double pseudo_distance(const A& w, const B& z) {
    return pseudo_distance(std::span<const cplx>(w.coords()), std::span<const cplx>(z.coords()));
}

/// d(w, z) = sqrt(delta(w, z)); a genuine metric on the sphere.
double boundary_metric(const BoundaryPoint& w, const BoundaryPoint& z);

/// Quasi-triangle constant assumed by the admissibility regions. d being a
/// metric gives delta(a,b) <= 2 (delta(a,c) + delta(c,b)); the sampled ratio
/// below validates the value but never feeds it back in.
inline constexpr double kQuasiTriangleD = 2.0;

using BoundaryTriple = std::array<BoundaryPoint, 3>;

struct QuasiTriangleScan {
    double max_ratio = 0.0;    // max of delta(a,b) / (delta(a,c) + delta(c,b))
    std::size_t used = 0;      // triples entering the max
    std::size_t skipped = 0;   // zero-denominator triples dropped
    std::size_t argmax = 0;    // index (within the input) of the maximizer
};

/// Scans triples (a, b, c) for the empirical quasi-triangle ratio.
QuasiTriangleScan quasi_triangle_ratio(std::span<const BoundaryTriple> samples);

} // namespace hardy

#endif
