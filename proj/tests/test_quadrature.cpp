#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "hardy/kernels.hpp"
#include "hardy/quadrature.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

RuleOptions qmc_ok() {
    RuleOptions o;
    o.allow_qmc = true;
    return o;
}

} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("build rejects bad arguments") {
    CHECK_THROWS_AS(QuadratureRule::build(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureRule::build(1, 0), std::invalid_argument);
}

TEST_CASE("circle rule: counts, weights, trigonometric exactness") {
    for (int level : {1, 3}) {
        const auto rule = QuadratureRule::build(1, level);
        CHECK(rule.size() == std::size_t(64) << level);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weight(i);
        CHECK(sum == 1.0); // weights are exact binary fractions
        // moments of z^k vanish for 1 <= k < N
        for (int k : {1, 2, 3, 7}) {
            const cplx m = pairing([&](std::span<const cplx> z) { return std::pow(z[0], k); },
                                   [](std::span<const cplx>) { return cplx(1.0, 0.0); }, rule);
            CHECK(std::abs(m) < 1e-13);
        }
    }
}

TEST_CASE("lp_norm basics") {
    const auto rule = QuadratureRule::build(1, 2);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        CHECK(lp_norm([](std::span<const cplx>) { return cplx(1.0, 0.0); }, p, rule) ==
              doctest::Approx(1.0).epsilon(1e-14));
        CHECK(lp_norm([](std::span<const cplx>) { return cplx(-3.0, 4.0); }, p, rule) ==
              doctest::Approx(5.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(
        (void)lp_norm([](std::span<const cplx>) { return cplx(1.0, 0.0); }, 0.5, rule),
        std::invalid_argument);
}

TEST_CASE("lp_norm reports the offending node for non-finite values") {
    const auto rule = QuadratureRule::build(1, 1);
    const cplx bad_node = rule.node(3)[0];
    try {
        (void)lp_norm(
            [&](std::span<const cplx> z) {
                return std::abs(z[0] - bad_node) < 1e-12
                           ? cplx(std::numeric_limits<double>::quiet_NaN(), 0.0)
                           : cplx(1.0, 0.0);
            },
            2.0, rule);
        FAIL("expected evaluation_error");
    } catch (const evaluation_error& e) {
        CHECK(e.node_index() == 3);
    }
}

TEST_CASE("squared-pole norm matches the series oracle") {
    // f(z) = |1 - 0.5 z|^-2 on the circle; ||f||_2^2 = (1+0.25)/(1-0.25)^3.
    const auto rule = QuadratureRule::build(1, 3);
    const double n2 = lp_norm(
        [](std::span<const cplx> z) {
            return cplx(1.0, 0.0) / ((cplx(1.0, 0.0) - 0.5 * z[0]) *
                                     (cplx(1.0, 0.0) - 0.5 * std::conj(z[0])));
        },
        2.0, rule);
    const double closed = (1.0 + 0.25) / std::pow(1.0 - 0.25, 3);
    const double series = oracles::sphere_kernel_integral(1.0, 2.0, 0.25);
    CHECK(series == doctest::Approx(closed).epsilon(1e-14));
    CHECK(n2 * n2 == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("pairing reproduces kernel values") {
    const auto rule = QuadratureRule::build(1, 3);
    CHECK(std::abs(pairing([](std::span<const cplx>) { return cplx(1.0, 0.0); },
                           [](std::span<const cplx>) { return cplx(1.0, 0.0); },
                           rule) -
                   cplx(1.0, 0.0)) < 1e-14);
    // mean of z over the circle
    CHECK(std::abs(pairing([](std::span<const cplx> z) { return z[0]; },
                           [](std::span<const cplx>) { return cplx(1.0, 0.0); },
                           rule)) < 1e-13);

    const Point a({{0.3, 0.0}});
    const Point b({{0.0, 0.5}});
    const cplx got = pairing([&](std::span<const cplx> z) { return cauchy_kernel(a, z); },
                             [&](std::span<const cplx> z) { return cauchy_kernel(b, z); }, rule);
    // reproducing identity <k_a, k_b> = k_a(b) = (1 - conj(a) b)^-1
    const cplx want = cplx(1.0, 0.0) / (cplx(1.0, 0.0) - cplx(0.3, 0.0) * cplx(0.0, 0.5));
    CHECK(std::abs(got - want) < 1e-8);
    CHECK(std::abs(want - kernel_pair(a, b)) < 1e-15);
}

TEST_CASE("pairing(f,f) equals the squared 2-norm") {
    const auto rule = QuadratureRule::build(1, 2);
    const Point a({{0.6, 0.2}});
    const auto f = [&](std::span<const cplx> z) { return cauchy_kernel(a, z); };
    const double n2 = lp_norm(f, 2.0, rule);
    const cplx pp = pairing(f, f, rule);
    CHECK(pp.imag() == 0.0);
    CHECK(std::abs(pp.real() - n2 * n2) <= 1e-12 * pp.real());
}

TEST_CASE("product rule for the 3-sphere") {
    const auto rule = QuadratureRule::build(2, 2);
    CHECK(rule.dim() == 2);
    CHECK(rule.size() == std::size_t(64 * 64 * 64));
    const double sum = block_sum(rule.size(), [&](std::size_t i) { return rule.weight(i); });
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    // first-coordinate moment vanishes by angular symmetry
    const cplx z1 = pairing([](std::span<const cplx> z) { return z[0]; },
                            [](std::span<const cplx>) { return cplx(1.0, 0.0); }, rule);
    CHECK(std::abs(z1) < 1e-10);
}

TEST_CASE("|z1|^2 integrates to 1/n") {
    // n = 2, level 3 per the stated tolerance
    const auto rule = QuadratureRule::build(2, 3);
    const double v = detail::lp_norm_pow([](std::span<const cplx> z) { return z[0]; }, 2.0,
                                         rule, default_exec());
    CHECK(v == doctest::Approx(0.5).epsilon(1e-8));
    // n = 3 via the lattice fallback
    const auto r3 = QuadratureRule::build(3, 1, qmc_ok());
    CHECK(r3.low_discrepancy());
    const double v3 = detail::lp_norm_pow([](std::span<const cplx> z) { return z[0]; }, 2.0,
                                          r3, default_exec());
    CHECK(v3 == doctest::Approx(1.0 / 3.0).epsilon(2e-4));
}

TEST_CASE("node-count overflow: capacity error without the fallback flag") {
    CHECK_THROWS_AS((void)QuadratureRule::build(2, 4), capacity_error);
    try {
        (void)QuadratureRule::build(2, 4);
    } catch (const capacity_error& e) {
        CHECK(std::string(e.what()).find("allow_qmc") != std::string::npos);
    }
    const auto rule = QuadratureRule::build(2, 4, qmc_ok());
    CHECK(rule.low_discrepancy());
    CHECK(rule.size() > QuadratureRule::build(2, 3).size()); // monotone growth
}

TEST_CASE("lattice rule: normalization and odd-moment cancellation") {
    const auto rule = QuadratureRule::build(2, 4, qmc_ok());
    const double sum = block_sum(rule.size(), [&](std::size_t i) { return rule.weight(i); });
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    const cplx z1 = pairing([](std::span<const cplx> z) { return z[0]; },
                            [](std::span<const cplx>) { return cplx(1.0, 0.0); }, rule);
    CHECK(std::abs(z1) < 1e-10); // antithetic pairs cancel odd monomials
}

TEST_CASE("pulled rule is exact for the squared kernel at its center") {
    for (double r : {0.5, 0.99, 0.999999}) {
        const Point a({{r, 0.0}});
        const auto rule = QuadratureRule::build(1, 3).pulled_toward(a);
        CHECK(rule.adapted());
        const double n2 = lp_norm(
            [&](std::span<const cplx> z) { return cauchy_kernel(a, z); }, 2.0, rule);
        const double want = std::pow(1.0 - r * r, -0.5);
        // the cancellation in 1 - <a, z> near the boundary costs ~1e-16/(1-|a|^2)
        CHECK(n2 == doctest::Approx(want).epsilon(r > 0.999 ? 3e-10 : 1e-13));
    }
    const Point a2({{0.7, 0.0}, {0.0, 0.7}}); // |a| = 0.9899
    const auto rule2 = QuadratureRule::build(2, 2).pulled_toward(a2);
    const double n2 = lp_norm(
        [&](std::span<const cplx> z) { return cauchy_kernel(a2, z); }, 2.0, rule2);
    CHECK(n2 == doctest::Approx(1.0 / a2.one_minus_abs2()).epsilon(1e-12));
}

TEST_CASE("refinement convergence for pulled kernel norms") {
    // |a| <= 0.9 family: successive levels agree to 1e-6 from L = 4 (n = 1)
    // and L = 3 (n = 2).
    const Point a1({{0.9, 0.0}});
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        const double n4 = kernel_norm(a1, p, QuadratureRule::build(1, 4)).norm;
        const double n5 = kernel_norm(a1, p, QuadratureRule::build(1, 5)).norm;
        CHECK(std::abs(n4 - n5) / n5 <= 1e-6);
    }
    const Point a2({{0.6, 0.0}, {0.42, 0.42}});
    for (double p : {2.0, 4.0}) {
        const double n3 = kernel_norm(a2, p, QuadratureRule::build(2, 3)).norm;
        const double n4 = kernel_norm(a2, p, QuadratureRule::build(2, 4, qmc_ok())).norm;
        CHECK(std::abs(n3 - n4) / n4 <= 1e-6);
    }
}

TEST_CASE("multi-peak combination handles two deep poles") {
    const Point a({{0.995, 0.0}});
    const Point b({{0.0, 0.99}});
    const auto base = QuadratureRule::build(1, 3);
    const Point hints[] = {a, b};
    const auto rule = base.with_peaks(hints);
    CHECK(rule.adapted());
    CHECK(rule.size() % base.size() == 0); // base + the ladder of pullback copies
    const double sum = block_sum(rule.size(), [&](std::size_t i) { return rule.weight(i); });
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    for (const Point& pole : hints) {
        const double got = lp_norm(
            [&](std::span<const cplx> z) { return cauchy_kernel(pole, z); }, 1.5, rule);
        const double want = oracles::kernel_norm_series(1, 1.5, pole.abs());
        CHECK(got == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("discrete Hoelder consistency on random kernel mixes") {
    const auto rule = QuadratureRule::build(1, 2);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-0.7, 0.7);
    for (int t = 0; t < 20; ++t) {
        const Point a({{unif(rng), unif(rng) * 0.5}});
        const Point b({{unif(rng) * 0.5, unif(rng)}});
        const auto f = [&](std::span<const cplx> z) { return cauchy_kernel(a, z); };
        const auto g = [&](std::span<const cplx> z) { return cauchy_kernel(b, z); };
        const auto fg = [&](std::span<const cplx> z) { return f(z) * g(z); };
        const double s = 1.5, p = 2.0, q = 6.0; // 1/1.5 = 1/2 + 1/6
        CHECK(lp_norm(fg, s, rule) <= lp_norm(f, p, rule) * lp_norm(g, q, rule) + 1e-10);
    }
}

TEST_CASE("disk cache round-trips rules bit for bit") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hardy_rule_cache_test";
    fs::remove_all(dir);
    RuleOptions opts;
    opts.cache_dir = dir.string();
    const auto built = cached_rule(1, 2, opts);
    CHECK(fs::exists(dir / "rule_n1_L2.bin"));
    const auto loaded = cached_rule(1, 2, opts); // second call reads the file
    REQUIRE(loaded.size() == built.size());
    for (std::size_t i = 0; i < built.size(); ++i) {
        CHECK(loaded.weight(i) == built.weight(i));
        CHECK(loaded.node(i)[0] == built.node(i)[0]);
    }
    fs::remove_all(dir);
}

} // TEST_SUITE
