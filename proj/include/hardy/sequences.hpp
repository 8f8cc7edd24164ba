#ifndef HARDY_SEQUENCES_HPP
#define HARDY_SEQUENCES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/geometry.hpp"

namespace hardy {

/// Rejection sampling could not reach the requested pairwise separation.
class infeasible_separation : public std::runtime_error {
public:
    explicit infeasible_separation(const std::string& what) : std::runtime_error(what) {}
};

struct GeneratorSpec {
    enum class Kind { radial, spiral, random_separated, accumulating, explicit_file };
    Kind kind = Kind::radial;
    std::size_t dim = 1;
    std::size_t count = 10;
    double ratio = 0.5;       // radial/spiral: 1 - |a_k| = ratio^k
    double turns = 1.0;       // spiral: total turns over the sequence
    double separation = 0.1;  // random_separated: floor on (sep ratio - 1)
    double exponent = 2.0;    // accumulating: 1 - |a_k| = k^(-exponent)
    std::uint64_t seed = 1;
    std::string file;         // explicit_file

    std::string name() const;   // e.g. "radial"
    std::string params() const; // e.g. "c=0.5"
};

class PointSequence {
public:
    /// Points must be pairwise distinct; coincident points are rejected.
    /// The pairwise separation min |1 - conj(a).b| / sqrt((1-|a|^2)(1-|b|^2))
    /// is reported, and sequences under `separation_floor` are flagged, not
    /// rejected (ill-posed duality surfaces later as a degenerate-sequence
    /// error).
    PointSequence(std::vector<Point> points, std::string generator = "explicit",
                  std::string params = "", double separation_floor = 1.0 + 1e-6);

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return points_.empty() ? 0 : points_[0].dim(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }

    double min_separation() const { return min_separation_; }
    std::pair<std::size_t, std::size_t> closest_pair() const { return closest_pair_; }
    bool flagged() const { return flagged_; }

    const std::string& generator() const { return generator_; }
    const std::string& params() const { return params_; }

private:
    std::vector<Point> points_;
    std::string generator_, params_;
    double min_separation_ = 0.0;
    std::pair<std::size_t, std::size_t> closest_pair_{0, 0};
    bool flagged_ = false;
};

/// Deterministic test families. Radial/accumulating radii that would leave the
/// numeric ball (1 - |a| <= 1e-12) are dropped, so the produced count can be
/// smaller than requested; the params string records it.
PointSequence generate_sequence(const GeneratorSpec& spec);

} // namespace hardy

#endif
