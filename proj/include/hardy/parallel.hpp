#ifndef HARDY_PARALLEL_HPP
#define HARDY_PARALLEL_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hardy {

/// Execution mode for the data-parallel kernels. Every parallel kernel has a
/// serial twin with the identical block structure, so results are bit-for-bit
/// equal across modes and thread counts.
enum class Exec { serial, parallel };

namespace detail {
inline Exec& default_exec() {
    static Exec mode = Exec::parallel;
    return mode;
}
} // namespace detail

inline void set_default_exec(Exec mode) { detail::default_exec() = mode; }
inline Exec default_exec() { return detail::default_exec(); }

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Accumulation runs over fixed blocks of this many consecutive indices;
/// block partials are then folded in a fixed pairwise tree. The grouping is
/// independent of the thread count, which is what makes reductions
/// deterministic.
inline constexpr std::size_t kReduceBlock = 4096;

namespace detail {

template <typename Acc>
Acc fold_pairwise(std::vector<Acc>& parts) {
    if (parts.empty()) return Acc{};
    for (std::size_t stride = 1; stride < parts.size(); stride *= 2) {
        for (std::size_t i = 0; i + stride < parts.size(); i += 2 * stride) {
            parts[i] += parts[i + stride];
        }
    }
    return parts[0];
}

template <typename Acc, typename Term>
std::vector<Acc> block_partials(std::size_t count, Term&& term, Exec mode) {
    const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
    std::vector<Acc> parts(nblocks, Acc{});
    const auto body = [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = std::min(count, lo + kReduceBlock);
        Acc acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        parts[b] = acc;
    };
#ifdef _OPENMP
    if (mode == Exec::parallel && nblocks > 1) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b)
            body(static_cast<std::size_t>(b));
        return parts;
    }
#endif
    (void)mode;
    for (std::size_t b = 0; b < nblocks; ++b) body(b);
    return parts;
}

} // namespace detail

/// Deterministic blocked sum of term(i), i in [0, count).
template <typename Term>
double block_sum(std::size_t count, Term&& term, Exec mode = default_exec()) {
    auto parts = detail::block_partials<double>(count, std::forward<Term>(term), mode);
    return detail::fold_pairwise(parts);
}

template <typename Term>
std::complex<double> block_sum_complex(std::size_t count, Term&& term,
                                       Exec mode = default_exec()) {
    auto parts =
        detail::block_partials<std::complex<double>>(count, std::forward<Term>(term), mode);
    return detail::fold_pairwise(parts);
}

/// Max with the index of the first maximizer; ties resolve to the lowest index,
/// so the witness is deterministic as well.
struct MaxWitness {
    double value = -1.0 / 0.0;
    std::size_t index = 0;
    MaxWitness& operator+=(const MaxWitness& other) {
        if (other.value > value || (other.value == value && other.index < index)) *this = other;
        return *this;
    }
};

template <typename Term>
MaxWitness block_max(std::size_t count, Term&& term, Exec mode = default_exec()) {
    const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
    std::vector<MaxWitness> parts(nblocks);
    const auto body = [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = std::min(count, lo + kReduceBlock);
        MaxWitness acc;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = term(i);
            if (v > acc.value) acc = MaxWitness{v, i};
        }
        parts[b] = acc;
    };
#ifdef _OPENMP
    if (mode == Exec::parallel && nblocks > 1) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b)
            body(static_cast<std::size_t>(b));
    } else
#endif
    {
        for (std::size_t b = 0; b < nblocks; ++b) body(b);
    }
    auto best = detail::fold_pairwise(parts);
    return best;
}

/// Independent iterations with disjoint writes.
template <typename Body>
void par_for(std::size_t count, Body&& body, Exec mode = default_exec()) {
#ifdef _OPENMP
    if (mode == Exec::parallel && count > 1) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#endif
    (void)mode;
    for (std::size_t i = 0; i < count; ++i) body(i);
}

} // namespace hardy

#endif
