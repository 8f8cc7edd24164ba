#include "hardy/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hardy/io.hpp"

namespace hardy {

namespace {

double separation_ratio(const Point& a, const Point& b) {
    const double num = pseudo_distance(std::span<const cplx>(a.coords()),
                                       std::span<const cplx>(b.coords()));
    return num / std::sqrt(a.one_minus_abs2() * b.one_minus_abs2());
}

Point radial_point(std::size_t n, double radius, double angle) {
    CVec c(n, cplx(0.0, 0.0));
    c[0] = radius * cplx(std::cos(angle), std::sin(angle));
    return Point(std::move(c));
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

std::string GeneratorSpec::name() const {
    switch (kind) {
        case Kind::radial: return "radial";
        case Kind::spiral: return "spiral";
        case Kind::random_separated: return "random_separated";
        case Kind::accumulating: return "accumulating";
        case Kind::explicit_file: return "explicit";
    }
    return "unknown";
}

std::string GeneratorSpec::params() const {
    switch (kind) {
        case Kind::radial: return "c=" + fmt(ratio);
        case Kind::spiral: return "c=" + fmt(ratio) + ";turns=" + fmt(turns);
        case Kind::random_separated:
            return "sep=" + fmt(separation) + ";seed=" + std::to_string(seed);
        case Kind::accumulating: return "exponent=" + fmt(exponent);
        case Kind::explicit_file: return "file=" + file;
    }
    return "";
}

PointSequence::PointSequence(std::vector<Point> points, std::string generator,
                             std::string params, double separation_floor)
    : points_(std::move(points)), generator_(std::move(generator)), params_(std::move(params)) {
    if (points_.empty()) throw std::invalid_argument("PointSequence: empty sequence");
    const std::size_t n = points_[0].dim();
    for (const Point& p : points_)
        if (p.dim() != n) throw dimension_mismatch(p.dim(), n);
    min_separation_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            const double r = separation_ratio(points_[i], points_[j]);
            if (r < min_separation_) {
                min_separation_ = r;
                closest_pair_ = {i, j};
            }
        }
    }
    if (points_.size() == 1) min_separation_ = std::numeric_limits<double>::infinity();
    if (points_.size() > 1 && min_separation_ <= 1.0 + 1e-15)
        throw degenerate_sequence("PointSequence: points " +
                                      std::to_string(closest_pair_.first) + " and " +
                                      std::to_string(closest_pair_.second) + " coincide",
                                  closest_pair_.first, closest_pair_.second);
    flagged_ = points_.size() > 1 && min_separation_ < separation_floor;
}

PointSequence generate_sequence(const GeneratorSpec& spec) {
    if (spec.dim < 1) throw std::invalid_argument("generate_sequence: dim must be >= 1");
    if (spec.count < 1) throw std::invalid_argument("generate_sequence: count must be >= 1");
    std::vector<Point> pts;
    pts.reserve(spec.count);
    std::string extra;

    switch (spec.kind) {
        case GeneratorSpec::Kind::radial:
        case GeneratorSpec::Kind::spiral: {
            if (!(spec.ratio > 0.0 && spec.ratio < 1.0))
                throw std::invalid_argument("generate_sequence: ratio must be in (0,1)");
            double gap = 1.0;
            for (std::size_t k = 1; k <= spec.count; ++k) {
                gap *= spec.ratio;
                if (gap <= 1e-12) {
                    // Deeper radii leave the numeric ball; truncate.
                    extra = ";produced=" + std::to_string(pts.size());
                    break;
                }
                const double angle =
                    spec.kind == GeneratorSpec::Kind::spiral
                        ? 2.0 * std::numbers::pi * spec.turns * static_cast<double>(k) /
                              static_cast<double>(spec.count)
                        : 0.0;
                pts.push_back(radial_point(spec.dim, 1.0 - gap, angle));
            }
            break;
        }
        case GeneratorSpec::Kind::accumulating: {
            if (!(spec.exponent > 0.0))
                throw std::invalid_argument("generate_sequence: exponent must be > 0");
            for (std::size_t k = 1; k <= spec.count; ++k) {
                const double gap = std::pow(static_cast<double>(k), -spec.exponent);
                if (gap <= 1e-12) {
                    extra = ";produced=" + std::to_string(pts.size());
                    break;
                }
                pts.push_back(radial_point(spec.dim, 1.0 - gap, 0.0));
            }
            break;
        }
        case GeneratorSpec::Kind::random_separated: {
            if (!(spec.separation > 0.0))
                throw std::invalid_argument("generate_sequence: separation must be > 0");
            std::mt19937_64 rng(spec.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const double floor = 1.0 + spec.separation;
            std::size_t attempts = 0;
            while (pts.size() < spec.count) {
                if (++attempts > 1'000'000)
                    throw infeasible_separation(
                        "generate_sequence: could not place " + std::to_string(spec.count) +
                        " points at separation " + fmt(spec.separation) + " after 1e6 attempts");
                CVec c(spec.dim);
                double norm2 = 0.0;
                for (auto& z : c) {
                    z = cplx(gauss(rng), gauss(rng));
                    norm2 += std::norm(z);
                }
                // Volume-uniform radius, capped away from the boundary.
                const double r =
                    std::min(0.999, std::pow(unif(rng), 1.0 / (2.0 * spec.dim)));
                const double scale = r / std::sqrt(norm2);
                for (auto& z : c) z *= scale;
                Point cand(std::move(c));
                bool ok = true;
                for (const Point& q : pts)
                    if (separation_ratio(cand, q) < floor) {
                        ok = false;
                        break;
                    }
                if (ok) pts.push_back(std::move(cand));
            }
            break;
        }
        case GeneratorSpec::Kind::explicit_file:
            return load_sequence_json(spec.file);
    }
    if (pts.empty())
        throw std::invalid_argument("generate_sequence: no representable points produced");
    return PointSequence(std::move(pts), spec.name(),
                         spec.params() + ";N=" + std::to_string(spec.count) + extra);
}

} // namespace hardy
