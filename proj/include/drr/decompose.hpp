#pragma once

#include "drr/core.hpp"
#include "drr/flow.hpp"

#include <cstdint>
#include <vector>

namespace drr::decompose {

// Cost-no-worse fractional assignment y with few fractional edges per vertex
// star, together with its convex combination over degree-preserving sets.
struct ReducedSolution {
    std::vector<Rat> y;
    core::ConvexCombination combination;
    core::DegreeBounds bounds;
};

// Convex combination whose scalars are integer multiples of 1/2^level.
struct DyadicCombination {
    struct Term {
        Rat lambda;  // h / 2^level, h >= 0
        core::EdgeSet set;
    };
    std::vector<Term> terms;
    long level = 0;
    std::vector<Rat> y_prime;
};

// Optimal vertex of  min c^T y  s.t.  a_j^T y = a_j^T x,  y in P  (the
// degree-bound box polytope), decomposed into integral degree-preserving
// sets. Integral x short-circuits to y = x. The per-vertex fractional
// support of y is at most 2k by the vertex property.
ReducedSolution solve_reduced(const core::RoundingInstance& inst);

// Convex decomposition of y over degree-preserving integral sets via the
// s/t circulation network over the bipartite graph. Throws
// std::invalid_argument("not in polytope") when y admits no feasible
// circulation. At most |E| + |V| + 2 terms.
core::ConvexCombination decompose_into_sets(const core::BipartiteGraph& graph,
                                            const std::vector<Rat>& y,
                                            const core::DegreeBounds& bounds);

// Smallest level l with 2^l >= (2 * max(K, k, 2))^2, i.e.
// ceil(2*log2(2*max(K, k, 2))). Keeps both the per-edge scalar rounding
// error and the induced per-function error within their budgets.
long choose_level(std::size_t num_terms, std::size_t num_funcs);

// Dyadic scalar rounding through the small min-cost circulation network:
// per-term arcs bounded by floor/ceil of lambda_i * 2^level and a return
// arc pinned to exactly 2^level. Never infeasible; cost never increases;
// scalars already in {0,1} stay unchanged.
DyadicCombination round_scalars(const core::ConvexCombination& comb,
                                const std::vector<Rat>& costs, long level);

}  // namespace drr::decompose
