#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dgmorl/types.hpp"

namespace dgmorl {

/// Strict Pareto dominance: a >= b on every objective and a > b on at least one.
bool pareto_dominates(const ValueVector& a, const ValueVector& b);

/// Removes entries dominated by another entry. Exact comparisons; entries with
/// identical values collapse to the earliest handle. Input order is preserved.
std::vector<CcsEntry> pareto_prune(std::vector<CcsEntry> entries);

/// Vertices of the upper envelope max_v (v . w) over the weight simplex.
/// Supported for d in {2, 3}; larger dimensions raise UnsupportedDimension.
/// Result always contains the d simplex extrema, is deduplicated at 1e-9 and
/// sorted lexicographically descending.
CornerWeightSet corner_weights(const std::vector<ValueVector>& values);

/// Closed convex-coverage set: Pareto prune, then keep entries attaining the
/// maximum scalarized value (within 1e-9) at some corner weight, recomputing
/// corners after removals until a fixed point. Ties are kept.
CcsSet ccs_prune(std::vector<CcsEntry> entries);

/// Maximum scalarized value over the set and the index of the first maximizer.
std::pair<double, std::size_t> max_utility_over_set(const std::vector<ValueVector>& values,
                                                    const WeightVector& w);

/// Deterministic evaluation grid. d=2: n points (i/(n-1), 1-i/(n-1)) starting
/// at (0,1). d=3: full simplex lattice {(i,j,k)/m : i+j+k=m} for the smallest
/// m whose lattice has at least n points; the whole lattice is returned.
std::vector<WeightVector> equidistant_weights(std::size_t dim, std::size_t n);

/// Mean over eval_weights of the best scalarized value in the set.
double expected_utility(const std::vector<ValueVector>& values,
                        const std::vector<WeightVector>& eval_weights);

} // namespace dgmorl
