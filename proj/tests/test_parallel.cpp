#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hardy/parallel.hpp"

using namespace hardy;

TEST_SUITE("parallel") {

TEST_CASE("serial and parallel reductions are bit-identical") {
    const std::size_t count = 1'000'037;
    const auto term = [](std::size_t i) {
        const double x = static_cast<double>(i % 9973) * 1e-4;
        return std::sin(x) * 1e-3 + 1.0 / (1.0 + x);
    };
    const double s = block_sum(count, term, Exec::serial);
    const double p = block_sum(count, term, Exec::parallel);
    CHECK(s == p);

    const auto cterm = [&](std::size_t i) {
        return std::complex<double>(term(i), term(i + 1));
    };
    CHECK(block_sum_complex(count, cterm, Exec::serial) ==
          block_sum_complex(count, cterm, Exec::parallel));
}

TEST_CASE("parallel sum is independent of the thread count") {
#ifdef _OPENMP
    const std::size_t count = 500'001;
    const auto term = [](std::size_t i) { return 1.0 / (1.0 + static_cast<double>(i)); };
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double one = block_sum(count, term, Exec::parallel);
    omp_set_num_threads(4);
    const double four = block_sum(count, term, Exec::parallel);
    omp_set_num_threads(saved);
    CHECK(one == four);
#endif
}

TEST_CASE("max reduction reports the first maximizer") {
    const std::size_t count = 100'000;
    const auto term = [](std::size_t i) {
        return i % 1000 == 137 ? 5.0 : 1.0 / (1.0 + static_cast<double>(i));
    };
    const auto ms = block_max(count, term, Exec::serial);
    const auto mp = block_max(count, term, Exec::parallel);
    CHECK(ms.value == 5.0);
    CHECK(ms.index == 137); // ties resolve to the lowest index
    CHECK(mp.value == ms.value);
    CHECK(mp.index == ms.index);
}

TEST_CASE("par_for covers every index once") {
    std::vector<int> hits(10'000, 0);
    par_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, Exec::parallel);
    for (const int h : hits) CHECK(h == 1);
}

TEST_CASE("empty reductions are zero") {
    CHECK(block_sum(0, [](std::size_t) { return 1.0; }) == 0.0);
    CHECK(block_max(0, [](std::size_t) { return 1.0; }).value ==
          -std::numeric_limits<double>::infinity());
}

} // TEST_SUITE
