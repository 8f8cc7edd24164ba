#include <doctest.h>

#include <random>

#include "hardy/kernels.hpp"
#include "oracles.hpp"

using namespace hardy;

TEST_SUITE("kernels") {

TEST_CASE("kernel values in closed form") {
    // pole at the origin: identically 1
    const Point zero = Point::origin(2);
    const BoundaryPoint z({{0.6, 0.0}, {0.0, 0.8}});
    CHECK(cauchy_kernel(zero, z) == cplx(1.0, 0.0));

    // n = 1: 1/(1 - 0.5) = 2
    const Point a({{0.5, 0.0}});
    const BoundaryPoint one({{1.0, 0.0}});
    CHECK(std::abs(cauchy_kernel(a, one) - cplx(2.0, 0.0)) < 1e-14);

    // n = 2 at the pole: (1 - |a|^2)^-2
    const Point a2({{0.5, 0.0}, {0.0, 0.0}});
    CHECK(std::abs(cauchy_kernel(a2, a2) - cplx(16.0 / 9.0, 0.0)) < 1e-14);
}

TEST_CASE("kernel norms against the series oracle") {
    const auto rule = QuadratureRule::build(1, 4);

    const auto at0 = kernel_norm(Point::origin(1), 3.0, rule);
    CHECK(at0.norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at0.c == doctest::Approx(1.0).epsilon(1e-12));

    // p = 2: reproducing identity
    for (double r : {0.3, 0.6, 0.9, 0.99}) {
        const auto nc = kernel_norm(Point({{r, 0.0}}), 2.0, rule);
        CHECK(nc.norm == doctest::Approx(std::pow(1 - r * r, -0.5)).epsilon(1e-8));
        CHECK(nc.c == doctest::Approx(1.0).epsilon(1e-8));
    }

    // p = 4, a = 0.5: ||k_a||_4^4 = (1 + 0.25)/(1 - 0.25)^3
    const auto n4 = kernel_norm(Point({{0.5, 0.0}}), 4.0, rule);
    const double want4 = std::pow((1.0 + 0.25) / std::pow(0.75, 3), 0.25);
    CHECK(n4.norm == doctest::Approx(want4).epsilon(1e-8));
    CHECK(want4 == doctest::Approx(oracles::kernel_norm_series(1, 4.0, 0.5)).epsilon(1e-13));

    // other exponents across radii; the r = 0.99 pole needs the level-5 rule
    const auto fine = QuadratureRule::build(1, 5);
    for (double p : {1.0, 1.5, 3.0}) {
        for (double r : {0.5, 0.9, 0.99}) {
            const auto nc = kernel_norm(Point({{0.0, r}}), p, r > 0.95 ? fine : rule);
            CHECK(nc.norm ==
                  doctest::Approx(oracles::kernel_norm_series(1, p, r)).epsilon(1e-7));
        }
    }
}

TEST_CASE("kernel norms in two complex dimensions") {
    const auto rule = QuadratureRule::build(2, 2);
    const Point a({{0.4, 0.2}, {0.0, 0.4}});
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        const auto nc = kernel_norm(a, p, rule);
        CHECK(nc.norm ==
              doctest::Approx(oracles::kernel_norm_series(2, p, a.abs())).epsilon(1e-7));
    }
}

TEST_CASE("the dimensionless constant is rotation invariant") {
    const auto rule = QuadratureRule::build(2, 2);
    std::mt19937_64 rng(17);
    const Point a({{0.5, 0.1}, {0.3, -0.2}});
    const double base = kernel_norm(a, 3.0, rule).c;
    for (int t = 0; t < 3; ++t) {
        const auto U = oracles::random_unitary(2, rng);
        const Point Ua(CVec(oracles::apply_matrix(U, 2, a.coords())));
        CHECK(kernel_norm(Ua, 3.0, rule).c == doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("norm-constant band validation flags bad rules") {
    const auto rule = QuadratureRule::build(1, 1);
    NormBand tight;
    tight.lo = 0.999;
    tight.hi = 1.001;
    // c(a, 4) sits well away from 1 at deep radii; the tight band must throw.
    CHECK_THROWS_AS((void)kernel_norm(Point({{0.99, 0.0}}), 4.0, rule, tight),
                    std::runtime_error);
}

TEST_CASE("normalized kernels have unit norm") {
    const auto rule = QuadratureRule::build(1, 5);
    const auto finer = QuadratureRule::build(1, 6);
    for (double r : {0.0, 0.5, 0.9, 0.99}) {
        for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
            const Point a({{r, 0.0}});
            const auto k = normalized_kernel(a, p, rule);
            const QuadratureRule check = r >= 0.1 ? finer.pulled_toward(a) : finer;
            CHECK(lp_norm(k, p, check) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
    // k_{a,2}(a) = ||k_a||_2
    const Point a({{0.8, 0.0}});
    const auto k2 = normalized_kernel(a, 2.0, rule);
    CHECK(std::abs(k2(std::span<const cplx>(a.coords()))) ==
          doctest::Approx(std::pow(1 - 0.64, -0.5)).epsilon(1e-10));
}

TEST_CASE("approximation kernel closed forms") {
    const BoundaryPoint one({{1.0, 0.0}});
    const BoundaryPoint minus({{-1.0, 0.0}});
    const BoundaryPoint i({{0.0, 1.0}});

    // t = 1 kills the pole for every pair and exponent
    CHECK(approx_kernel(one, minus, 1.0, 2.0) == doctest::Approx(1.0));
    CHECK(approx_kernel(one, i, 1.0, 3.5) == doctest::Approx(1.0));

    // diagonal: t^(-n)
    for (double t : {0.1, 0.5, 1.0}) {
        CHECK(approx_kernel(one, one, t, 2.0) == doctest::Approx(1.0 / t));
        const BoundaryPoint e1({{1.0, 0.0}, {0.0, 0.0}});
        CHECK(approx_kernel(e1, e1, t, 2.0) == doctest::Approx(1.0 / (t * t)));
    }

    // antipodal, n = 1, p = 2, t = 0.1: 0.1/|1 + 0.9|^2
    CHECK(approx_kernel(one, minus, 0.1, 2.0) == doctest::Approx(0.1 / 3.61));

    CHECK(approx_kernel(one, i, 0.3, 2.5) > 0.0);
    CHECK_THROWS_AS((void)approx_kernel(one, i, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)approx_kernel(one, i, 1.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)approx_kernel(one, i, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("size-estimate constant: diagonal ratio is 1, corner is the max") {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
        for (double p : {1.5, 2.0, 3.0}) {
            const auto fit = fit_size_estimate(n, p);
            CHECK(fit.constant >= 1.0);
            // the (t = 1, delta = 2) corner realizes 3^(np)
            CHECK(fit.constant ==
                  doctest::Approx(std::pow(3.0, double(n) * p)).epsilon(1e-12));
            CHECK(fit.witness_t == doctest::Approx(1.0));
            CHECK(fit.witness_delta == doctest::Approx(2.0));
            // grid refinement cannot move a corner maximum
            EstimateGrid fine;
            fine.refine = 2;
            CHECK(fit_size_estimate(n, p, fine).constant ==
                  doctest::Approx(fit.constant).epsilon(1e-12));
        }
    }
}

TEST_CASE("difference-estimate constant is finite and grid-stable") {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
        for (double p : {1.5, 2.0, 3.0}) {
            const auto fit = fit_smoothness_estimate(n, p);
            CHECK(fit.constant > 0.0);
            CHECK(std::isfinite(fit.constant));
            CHECK(fit.witness_offset > 0.0);
            EstimateGrid fine = EstimateGrid::smoothness_defaults();
            fine.refine = 2;
            const auto refd = fit_smoothness_estimate(n, p, fine);
            CHECK(std::abs(refd.constant - fit.constant) / fit.constant <= 0.10);
        }
    }
}

TEST_CASE("estimate scans reject empty grids") {
    EstimateGrid empty;
    empty.t_count = 1;
    CHECK_THROWS_AS((void)fit_size_estimate(1, 2.0, empty), empty_sample_error);
    CHECK_THROWS_AS((void)fit_smoothness_estimate(1, 2.0, empty), empty_sample_error);
}

} // TEST_SUITE

TEST_CASE("constant band at one level contains the next level's band") {
    // Containment holds up to the coarser level's own resolution error at the
    // deepest pole: ~1e-5 at level 4, below 1e-9 once level 5 has converged.
    const double slack[2] = {2e-5, 1e-9};
    for (int base : {4, 5}) {
        const auto coarse = QuadratureRule::build(1, base);
        const auto fine = QuadratureRule::build(1, base + 1);
        for (double p : {1.0, 1.5, 3.0, 4.0}) {
            double lo_c = 1e300, hi_c = -1e300, lo_f = 1e300, hi_f = -1e300;
            for (double r : {0.0, 0.3, 0.6, 0.9, 0.99}) {
                const Point a({{r, 0.0}});
                const double cc = kernel_norm(a, p, coarse).c;
                const double cf = kernel_norm(a, p, fine).c;
                lo_c = std::min(lo_c, cc);
                hi_c = std::max(hi_c, cc);
                lo_f = std::min(lo_f, cf);
                hi_f = std::max(hi_f, cf);
            }
            CHECK(lo_f >= lo_c - slack[base - 4]);
            CHECK(hi_f <= hi_c + slack[base - 4]);
        }
    }
}
