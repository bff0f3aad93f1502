#pragma once

#include "drr/core.hpp"
#include "drr/rng.hpp"
#include "drr/santa.hpp"

namespace drr::gen {

// Even cycle with num_edges edges (rounded up to the next even count >= 4),
// x = 1/2 everywhere, costs alternating 0 and 1.
core::RoundingInstance cycle_instance(int num_edges);

// Star with num_leaves edges, x = 1/num_leaves, costs 1..num_leaves, and one
// two-edge indicator function at the center (when it fits).
core::RoundingInstance star_instance(int num_leaves);

// The even cycle with one alternating 0/1 function spanning the whole
// cycle. Deliberately violates the star-support condition: validation must
// reject it.
core::RoundingInstance cycle_counterexample(int num_edges);

// Star with d+1 edges where edge 0 has x = 2^-d with cost 0 and the other d
// edges share the rest at cost 1/(1 - 2^-d) each. Exactly one edge gets
// picked and cost preservation forces it to be edge 0, so no marginal can
// be preserved.
core::RoundingInstance marginal_counterexample(int d);

// Random valid instance with exactly num_edges edges, small-denominator
// x in [0,1] and costs in [-10,10], and up to num_edges star-supported
// functions.
core::RoundingInstance random_rounding(int num_edges, Rng& rng);

// Random instance with the given limits; values and costs nonnegative with
// small denominators, budget drawn between zero and a generous multiple of
// the cheapest full assignment.
santa::SantaInstance random_santa(int max_players, int max_resources, Rng& rng);

}  // namespace drr::gen
