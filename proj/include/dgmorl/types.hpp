#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dgmorl/error.hpp"

namespace dgmorl {

/// Opaque identifier for a policy or demonstration behind a value vector.
using Handle = std::uint64_t;

/// Point in objective space. Components must be finite; dimension >= 2.
class ValueVector {
public:
    ValueVector() = default;
    explicit ValueVector(std::vector<double> components);
    static ValueVector zeros(std::size_t dim);

    std::size_t dim() const { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    std::span<const double> components() const { return c_; }

    bool operator==(const ValueVector& other) const { return c_ == other.c_; }

    std::string to_string() const;

private:
    std::vector<double> c_;
};

/// Point on the standard weight simplex: nonnegative components summing to 1.
/// Only constructible through make_weight, which enforces the invariants.
class WeightVector {
public:
    WeightVector() = default;

    std::size_t dim() const { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    std::span<const double> components() const { return c_; }

    bool operator==(const WeightVector& other) const { return c_ == other.c_; }

    std::string to_string() const;

private:
    friend WeightVector make_weight(std::vector<double> components);
    explicit WeightVector(std::vector<double> c) : c_(std::move(c)) {}
    std::vector<double> c_;
};

/// Validates and renormalizes. The sum may deviate from 1 by less than 1e-9
/// (accumulated rounding); larger deviations are rejected.
WeightVector make_weight(std::vector<double> components);

/// Linear scalarization v . w.
double utility(const ValueVector& v, const WeightVector& w);
double utility(std::span<const double> v, const WeightVector& w);

/// Vertices of the scalarized upper envelope over the weight simplex,
/// deduplicated at 1e-9 and sorted lexicographically descending. Always
/// contains the d simplex extrema.
struct CornerWeightSet {
    std::vector<WeightVector> weights;
    std::uint64_t source_hash = 0; // digest of the value set the corners came from
};

/// Convex-coverage set entries. Handles reference the originating policy or
/// demonstration; duplicate values collapse to the earliest handle.
struct CcsEntry {
    ValueVector value;
    Handle handle = 0;
};

struct CcsSet {
    std::vector<CcsEntry> entries;
};

} // namespace dgmorl
