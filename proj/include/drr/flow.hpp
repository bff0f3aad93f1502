#pragma once

#include "drr/core.hpp"
#include "drr/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace drr::flow {

struct Arc {
    int tail = -1;
    int head = -1;
    Rat lower;
    std::optional<Rat> upper;  // nullopt means +infinity
    Rat cost;
};

struct CirculationNetwork {
    int num_nodes = 0;

    std::vector<Arc> arcs;

    int add_node() { return num_nodes++; }
    int add_arc(int tail, int head, Rat lower, std::optional<Rat> upper, Rat cost);
};

struct Circulation {
    std::vector<Rat> flow;  // per arc id

    bool is_integral() const;
};

// Violated Hoffman cut: a node set U whose entering lower bounds exceed its
// leaving upper bounds, certifying that no feasible circulation exists.
struct CutCertificate {
    std::vector<int> nodes;
    bool validate(const CirculationNetwork& net) const;
};

struct CirculationResult {
    bool feasible = false;
    Circulation circulation;
    Rat cost;
    std::optional<CutCertificate> cut;
};

// Exact min-cost circulation: lower bounds eliminated into node imbalances,
// negative-cost arcs pre-saturated (they must have finite upper bounds),
// then successive shortest augmenting paths priced by Bellman-Ford in exact
// rationals. With integral bounds the result is integral.
CirculationResult min_cost_circulation(const CirculationNetwork& net);

// Is f a feasible circulation for net (conservation + bounds), exactly?
bool is_feasible(const CirculationNetwork& net, const Circulation& f);

// Exact Bellman-Ford negative-cycle detection on the residual network of f;
// absence certifies optimality of a feasible min-cost circulation.
bool residual_has_negative_cycle(const CirculationNetwork& net, const Circulation& f);

// Writes a feasible fractional circulation (integral bounds required) as a
// convex combination of integral feasible circulations, exactly. At most
// (#fractional arcs + 1) terms. Greedy: find an integral circulation inside
// the floor/ceil box around f, peel it off with the largest coefficient that
// keeps the remainder feasible, repeat; every step fixes one more arc to an
// integral value.
std::vector<std::pair<Rat, Circulation>> decompose_circulation(const CirculationNetwork& net,
                                                               const Circulation& f);

struct MatchingResult {
    bool feasible = false;
    core::EdgeSet matching;
    Rat weight;
};

// Minimum total weight matching covering every left vertex exactly once and
// every right vertex at most once; infeasible when no left-perfect matching
// exists.
MatchingResult min_weight_left_perfect_matching(const core::BipartiteGraph& bip,
                                                const std::vector<Rat>& weights);

}  // namespace drr::flow
