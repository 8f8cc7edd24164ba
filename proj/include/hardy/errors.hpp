#ifndef HARDY_ERRORS_HPP
#define HARDY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardy {

/// Ambient dimensions of two vectors disagree.
class dimension_mismatch : public std::invalid_argument {
public:
    dimension_mismatch(std::size_t lhs, std::size_t rhs)
        : std::invalid_argument("incompatible ambient dimensions: " + std::to_string(lhs) +
                                " vs " + std::to_string(rhs)),
          lhs_(lhs), rhs_(rhs) {}
    std::size_t lhs() const { return lhs_; }
    std::size_t rhs() const { return rhs_; }

private:
    std::size_t lhs_, rhs_;
};

/// A point sequence is numerically unusable (near-duplicate points, singular Gram).
class degenerate_sequence : public std::runtime_error {
public:
    degenerate_sequence(std::string what, std::size_t i, std::size_t j)
        : std::runtime_error(std::move(what)), i_(i), j_(j) {}
    std::size_t first_index() const { return i_; }
    std::size_t second_index() const { return j_; }

private:
    std::size_t i_, j_;
};

/// Requested rule size exceeds the node budget and the low-discrepancy fallback is off.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A boundary function produced a non-finite value at a quadrature node.
class evaluation_error : public std::runtime_error {
public:
    evaluation_error(std::string what, std::size_t node)
        : std::runtime_error(std::move(what)), node_(node) {}
    std::size_t node_index() const { return node_; }

private:
    std::size_t node_;
};

/// A sample specification produced nothing to scan (empty grid, empty admissible region).
class empty_sample_error : public std::runtime_error {
public:
    explicit empty_sample_error(const std::string& what) : std::runtime_error(what) {}
};

/// Fewer data points than a scan or regression needs.
class insufficient_data : public std::runtime_error {
public:
    explicit insufficient_data(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hardy

#endif
