#pragma once

#include "drr/core.hpp"
#include "drr/exactlp.hpp"
#include "drr/rng.hpp"
#include "drr/treemerge.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drr::santa {

struct SantaInstance {
    int players = 0;
    std::vector<Rat> values;              // per resource, >= 0
    std::vector<std::vector<Rat>> costs;  // [player][resource], >= 0
    Rat budget;                           // >= 0

    int num_resources() const { return static_cast<int>(values.size()); }
};

std::vector<std::string> validate_instance(const SantaInstance& inst);

struct ThresholdPartition {
    Rat threshold;
    Rat alpha;
    std::vector<int> big;    // resource ids with value >= threshold / alpha
    std::vector<int> small;  // the rest
};

ThresholdPartition partition_resources(const SantaInstance& inst, const Rat& threshold,
                                       const Rat& alpha);

// LP(T) with variables x_ib (player-major over partition.big) followed by
// z_is (player-major over partition.small); all variables bounded below by
// zero only. Rows, in order: per-player value covering, per (small, player)
// exclusion z_is <= 1 - sum_b x_ib, per big resource sum_i x_ib <= 1, per
// small resource sum_i z_is <= 1, per player sum_b x_ib <= 1.
exactlp::LinearProgram build_lp(const SantaInstance& inst, const ThresholdPartition& part);

struct LpSolutionTZ {
    std::vector<std::vector<Rat>> x;  // [player][big position]
    std::vector<std::vector<Rat>> z;  // [player][small position]
    std::vector<Rat> y;               // per player: 1 - sum_b x_ib
    Rat objective;
};

// Extracts the structured solution from a solved build_lp model.
LpSolutionTZ extract_lp_solution(const SantaInstance& inst, const ThresholdPartition& part,
                                 const exactlp::VertexSolution& sol);

struct BigRoundingResult {
    std::vector<std::vector<char>> X;  // [player][big position], 0/1
    std::vector<char> Y;               // per player: got no big resource
    std::vector<std::vector<Rat>> z_prime;  // [player][small position]
    Rat beta;                          // 1 + max per-small-resource deviation
    Rat total_cost;                    // big assignments plus fractional smalls
    bool concentration_ok = true;
    int retries_used = 0;
};

// Rounds the big-resource assignment through dependent_round on the
// player / (big + dummy) graph, with one linear function per small resource
// anchored at the dummy node.
BigRoundingResult round_big(const LpSolutionTZ& lp_sol, const SantaInstance& inst,
                            const ThresholdPartition& part, Rng& rng,
                            const treemerge::RoundConfig& config);

// Shmoys-Tardos style rounding of the fractional small-resource assignment:
// players in Q get k(i) copies, value-sorted breakpoint ranges become the
// copy graph, and a min-weight left-perfect matching picks the bundle.
// Returns per (player, resource id) selections. When expect_two_copies is
// set, k(i) >= 2 is enforced for every participating player.
std::map<std::pair<int, int>, char> round_small(
    const std::vector<std::vector<Rat>>& z_prime, const std::vector<int>& q_players,
    const Rat& beta, const SantaInstance& inst, const ThresholdPartition& part,
    bool expect_two_copies = false);

struct SantaSolution {
    std::vector<std::vector<int>> allocation;  // per player: resource ids
    Rat value;
    Rat cost;
    Rat threshold_used;
    Rat alpha;
    Rat beta_achieved;
    bool concentration_ok = true;
};

struct SolveConfig {
    Rat c0 = Rat(150);
    int max_retries = 64;
    Rat eps = Rat(1, 100);
    std::size_t subset_sum_cap = 100000;
};

// Binary search over the candidate threshold set (exact subset sums when
// few enough, geometric grid otherwise) for the largest T whose LP(T) is
// feasible within budget; rounds at that threshold.
SantaSolution solve(const SantaInstance& inst, const SolveConfig& config, Rng& rng);

// Candidate thresholds used by solve, ascending.
std::vector<Rat> threshold_candidates(const SantaInstance& inst, const SolveConfig& config);

struct AllAssignedInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Reduction {
    SantaInstance reduced;
    std::vector<Rat> column_min;      // per resource
    std::vector<int> argmin_player;   // per resource, smallest id attaining it
};

// All-resources-assigned reduction: costs shifted by per-resource column
// minima and the budget reduced accordingly. Throws AllAssignedInfeasible
// when the budget cannot cover the minima.
Reduction reduce_all_assigned(const SantaInstance& inst);

// Lifts a solution of the reduced instance: leftover resources go to their
// argmin-cost players; cost stays within the original budget.
SantaSolution lift_all_assigned(const Reduction& red, const SantaSolution& reduced_solution,
                                const SantaInstance& original);

}  // namespace drr::santa
