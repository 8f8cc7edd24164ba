#include <doctest.h>

#include <random>

#include "hardy/carleson.hpp"
#include "hardy/dual_system.hpp"
#include "hardy/kernels.hpp"
#include "hardy/linalg.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

PointSequence radial_seq(double c, std::size_t N, std::size_t dim = 1) {
    GeneratorSpec g;
    g.kind = GeneratorSpec::Kind::radial;
    g.ratio = c;
    g.count = N;
    g.dim = dim;
    return generate_sequence(g);
}

PointSequence accumulating_seq(double e, std::size_t N) {
    GeneratorSpec g;
    g.kind = GeneratorSpec::Kind::accumulating;
    g.exponent = e;
    g.count = N;
    return generate_sequence(g);
}

} // namespace

TEST_SUITE("carleson") {

TEST_CASE("sequence measure masses") {
    const auto m0 = carleson_measure(PointSequence({Point::origin(1)}));
    CHECK(m0.masses[0] == doctest::Approx(1.0));
    CHECK(m0.total == doctest::Approx(1.0));

    const auto m1 = carleson_measure(PointSequence({Point({{0.5, 0.0}})}));
    CHECK(m1.masses[0] == doctest::Approx(0.75));

    const auto m2 = carleson_measure(PointSequence({Point({{0.6, 0.0}, {0.0, 0.0}})}));
    CHECK(m2.masses[0] == doctest::Approx(0.4096));
}

TEST_CASE("single-atom tent constant is 2^-n at height 2") {
    const auto scan1 = tent_scan(PointSequence({Point::origin(1)}));
    CHECK(scan1.constant == doctest::Approx(0.5));
    CHECK(scan1.best_height == doctest::Approx(2.0));

    const auto scan2 = tent_scan(PointSequence({Point::origin(2)}));
    CHECK(scan2.constant == doctest::Approx(0.25));
    CHECK(scan2.best_height == doctest::Approx(2.0));
}

TEST_CASE("antipodal atoms never share a small tent") {
    // brute-force oracle: the best ratio for the pair equals the best ratio
    // for one point alone, scanned over a fine (center, height) grid
    const double r = 0.8;
    const PointSequence pair_seq({Point({{r, 0.0}}), Point({{-r, 0.0}})});
    const PointSequence solo({Point({{r, 0.0}})});

    double brute_pair = 0.0, brute_solo = 0.0;
    for (int ci = 0; ci < 720; ++ci) {
        const double th = 2.0 * std::numbers::pi * ci / 720.0;
        const CVec zeta{cplx(std::cos(th), std::sin(th))};
        for (int hk = -1; hk <= 12; ++hk) {
            const double h = std::exp2(-hk);
            double mp = 0.0, ms = 0.0;
            for (const Point& a : pair_seq.points())
                if (pseudo_distance(std::span<const cplx>(zeta),
                                    std::span<const cplx>(a.coords())) < h)
                    mp += a.one_minus_abs2();
            if (pseudo_distance(std::span<const cplx>(zeta),
                                std::span<const cplx>(solo[0].coords())) < h)
                ms += solo[0].one_minus_abs2();
            brute_pair = std::max(brute_pair, mp / h);
            brute_solo = std::max(brute_solo, ms / h);
        }
    }
    CHECK(brute_pair == doctest::Approx(brute_solo));
    CHECK(tent_constant(pair_seq) == doctest::Approx(tent_constant(solo)).epsilon(1e-12));
}

TEST_CASE("geometric radial tents are stable in depth") {
    const double t12 = tent_constant(radial_seq(0.5, 12));
    const double t20 = tent_constant(radial_seq(0.5, 20));
    CHECK(std::abs(t20 - t12) / t12 <= 0.25);
}

TEST_CASE("tent constant grows under inclusion") {
    const auto small = radial_seq(0.5, 8);
    const auto large = radial_seq(0.5, 16);
    CHECK(tent_constant(small) <= tent_constant(large) + 1e-12);
}

TEST_CASE("embedding constant: exact route at q = 2") {
    const auto rule = QuadratureRule::build(1, 3);
    const auto single = embedding_constant(PointSequence({Point({{0.4, 0.3}})}), 2.0, rule, 0);
    CHECK(single.exact);
    CHECK(single.value == doctest::Approx(1.0).epsilon(1e-12));

    const PointSequence S({Point({{0.0, 0.0}}), Point({{0.5, 0.0}})});
    const auto two = embedding_constant(S, 2.0, rule, 0);
    CHECK(two.exact);
    CHECK(two.value * two.value == doctest::Approx(1.0 + std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("q = 2 eigen route agrees with direct quadrature at the top vector") {
    const auto S = radial_seq(0.5, 6);
    const auto G = gram_matrix(S);
    double lambda = 0.0;
    const auto mu = hermitian_max_eigenvector(G, S.size(), lambda);
    const auto rule = QuadratureRule::build(1, 4).with_peaks(S.points());
    std::vector<double> n2(S.size());
    for (std::size_t i = 0; i < S.size(); ++i)
        n2[i] = std::pow(S[i].one_minus_abs2(), -0.5);
    const double direct = lp_norm(
        [&](std::span<const cplx> z) {
            cplx acc(0.0, 0.0);
            for (std::size_t i = 0; i < S.size(); ++i)
                acc += mu[i] * cauchy_kernel(S[i], z) / n2[i];
            return acc;
        },
        2.0, rule);
    CHECK(direct == doctest::Approx(std::sqrt(lambda)).epsilon(1e-6));
}

TEST_CASE("lower-bound route at q = 4 stays under the interpolated ceiling") {
    const auto S = radial_seq(0.5, 8);
    const auto rule = QuadratureRule::build(1, 4);
    const auto d2 = embedding_constant(S, 2.0, rule, 0);
    const auto d4 = embedding_constant(S, 4.0, rule, 24);
    CHECK(!d4.exact);
    CHECK(d4.value >= 1.0 - 1e-6); // spikes alone force >= 1
    // crude interpolation ceiling between q = 2 and the l1 bound D_inf <= N
    const double ceiling = std::sqrt(d2.value * static_cast<double>(S.size()));
    CHECK(d4.value <= ceiling);
}

TEST_CASE("embedding and tents are unitary invariant") {
    const PointSequence S({Point({{0.3, 0.2}, {0.1, 0.0}}), Point({{-0.4, 0.0}, {0.0, 0.5}}),
                           Point({{0.0, 0.0}, {0.6, 0.1}})});
    const auto rule = QuadratureRule::build(2, 2);
    const double d2 = embedding_constant(S, 2.0, rule, 0).value;
    std::mt19937_64 rng(77);
    const auto U = oracles::random_unitary(2, rng);
    std::vector<Point> rot;
    for (const Point& a : S.points())
        rot.emplace_back(CVec(oracles::apply_matrix(U, 2, a.coords())));
    const PointSequence RS(rot);
    CHECK(embedding_constant(RS, 2.0, rule, 0).value == doctest::Approx(d2).epsilon(1e-6));
    CHECK(tent_constant(RS) >= 0.0); // scan runs; centers adapt to the rotation
}

TEST_CASE("crosscheck wants at least three family members") {
    std::vector<PointSequence> family{radial_seq(0.5, 4), radial_seq(0.5, 8)};
    CHECK_THROWS_AS((void)hormander_crosscheck(family), insufficient_data);
}

TEST_CASE("crosscheck: plateau on the separated family, growth when accumulating") {
    std::vector<PointSequence> fam;
    for (std::size_t N : {5, 10, 20, 40}) fam.push_back(radial_seq(0.5, N));
    const auto rep = hormander_crosscheck(fam);
    REQUIRE(rep.series.size() == 4);
    for (const auto& pt : rep.series) {
        CHECK(std::isfinite(pt.tent));
        CHECK(std::isfinite(pt.d2_squared));
    }
    const auto& last = rep.series[3];
    const auto& prev = rep.series[2];
    CHECK(std::abs(last.tent - prev.tent) / prev.tent <= 0.25);
    CHECK(std::abs(last.d2_squared - prev.d2_squared) / prev.d2_squared <= 0.25);

    std::vector<PointSequence> acc;
    for (std::size_t N : {5, 10, 20, 40}) acc.push_back(accumulating_seq(2.0, N));
    const auto rep2 = hormander_crosscheck(acc);
    for (std::size_t i = 1; i < rep2.series.size(); ++i) {
        CHECK(rep2.series[i].tent > rep2.series[i - 1].tent);
        CHECK(rep2.series[i].d2_squared > rep2.series[i - 1].d2_squared);
    }
    // no plateau on the last doubling
    CHECK(rep2.series[3].d2_squared / rep2.series[2].d2_squared > 1.05);
}

} // TEST_SUITE
