#pragma once

#include "drr/core.hpp"
#include "drr/rng.hpp"
#include "drr/santa.hpp"
#include "drr/treemerge.hpp"

#include <string>
#include <vector>

namespace drr::harness {

// Exactly the integral sets of the degree polytope, by full enumeration.
// Hard guard |E| <= 22; throws std::length_error("too large") beyond it.
std::vector<core::EdgeSet> enumerate_degree_preserving_sets(const core::RoundingInstance& inst);

struct BruteForceSanta {
    Rat opt_value;
    std::vector<std::vector<int>> witness;  // per player: resource ids
};

// Exact optimum by enumerating every partial assignment of resources to
// players (or to nobody). Guard (players+1)^resources <= 10^7.
BruteForceSanta brute_force_santa(const santa::SantaInstance& inst);

struct ConcentrationReport {
    struct FunctionStats {
        Rat a_dot_x;
        Rat bound;                    // c0 * max(log2 k_hat, sqrt(aTx log2 k_hat))
        std::vector<Rat> deviations;  // one per trial, in trial order
        Rat violation_rate;
        Rat q50, q90, q99, max_dev;   // order statistics of the deviations
    };
    int trials = 0;
    std::vector<FunctionStats> functions;
};

// Runs dependent_round `trials` times with retries disabled and reports the
// empirical deviation distribution of every linear function against its
// concentration bound.
ConcentrationReport measure_concentration(const core::RoundingInstance& inst, int trials,
                                          Rng& rng, const Rat& c0);

struct OutcomeReport {
    struct Item {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Item> items;
    bool ok() const;
};

// Itemized re-check of an integral outcome against its instance: cost
// preservation, degree preservation, and the concentration bounds.
OutcomeReport verify_outcome(const core::RoundingInstance& inst, const core::EdgeSet& X,
                             const Rat& c0);

}  // namespace drr::harness
