#pragma once

#include "drr/core.hpp"
#include "drr/decompose.hpp"
#include "drr/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace drr::treemerge {

// One piece of the symmetric difference: a simple path or a simple (even)
// cycle, edges in traversal order.
struct Piece {
    std::vector<int> edges;
    bool is_cycle = false;
};

// Partition of s1 xor s2 into simple paths and cycles: pieces are
// edge-disjoint and cover the difference; every odd-degree vertex of the
// difference subgraph is the endpoint of exactly one path and no path ends
// at an even-degree vertex. Pieces are ordered by their smallest edge id.
std::vector<Piece> decompose_symmetric_difference(const core::BipartiteGraph& graph,
                                                  const core::EdgeSet& s1,
                                                  const core::EdgeSet& s2);

struct PairMergeResult {
    core::EdgeSet t;
    core::EdgeSet t_prime;
    std::vector<Piece> pieces;
    std::vector<bool> coins;  // one per piece, in piece order
};

// One uniform coin per piece sends its alternation class containing the
// smallest edge id to T (coin 0) or to T' (coin 1); agreeing edges are
// copied to both sides. Guarantees T + T' = S1 + S2, per-vertex degrees
// within floor/ceil of the average, and dependency degree <= 1 per output.
PairMergeResult pair_merge(const core::BipartiteGraph& graph, const core::EdgeSet& s1,
                           const core::EdgeSet& s2, Rng& rng);

struct MergeTrace {
    struct Run {
        core::EdgeSet set;
        std::uint64_t count;
    };
    struct Level {
        int level;                    // j; 2^j labels in total
        std::vector<Run> labels;      // run-length encoded, left to right
        bool chose_prime;             // false on the leaf level
        std::vector<Rat> y;           // average assignment of the level
        Rat cost;
        std::vector<bool> coins;      // coins consumed building this level
    };
    std::vector<Level> levels;  // leaf level first, root (level 0) last
};

struct TreeMergeResult {
    core::EdgeSet root;
    std::optional<MergeTrace> trace;
};

// The binary merge tree: level j is built by pair-merging consecutive labels
// of level j+1; of the two complementary labelings the cheaper one is kept
// (ties keep the non-prime side). Runs of equal labels are paired in bulk,
// which consumes exactly the same coins as the label-by-label procedure
// since merging equal sets flips no coin.
TreeMergeResult tree_merge(const core::BipartiteGraph& graph,
                           const decompose::DyadicCombination& dyadic,
                           const std::vector<Rat>& costs, Rng& rng, bool want_trace);

struct RoundConfig {
    Rat c0 = Rat(150);     // concentration constant
    int max_retries = 64;  // re-randomizations on concentration failure
    bool want_trace = false;
};

struct RoundingOutcome {
    core::EdgeSet X;
    std::optional<MergeTrace> trace;
    std::vector<Rat> deviations;  // |a_j^T X - a_j^T x|, exact, per function
    std::vector<Rat> bounds;      // concentration bound per function
    Rat cost_fractional;
    Rat cost_integral;
    int retries_used = 0;
    bool concentration_ok = true;
};

// c0 * max(log2(max(k,2)), sqrt(aTx * log2(max(k,2)))) with deterministic
// dyadic lower approximations of log2 and sqrt.
Rat concentration_bound(const Rat& aTx, std::size_t num_funcs, const Rat& c0);

// The deterministic pipeline prefix (validation, reduced LP, decomposition,
// scalar rounding), reusable across independent randomized attempts on the
// same instance.
struct PreparedRounding {
    bool integral = false;            // x was already integral
    core::EdgeSet integral_set;
    decompose::ReducedSolution reduced;
    decompose::DyadicCombination dyadic;
    std::vector<Rat> a_dot_x;         // per function
    std::vector<Rat> bounds;          // per function
    Rat cost_fractional;
};

PreparedRounding prepare_rounding(const core::RoundingInstance& inst, const Rat& c0);

RoundingOutcome round_prepared(const core::RoundingInstance& inst,
                               const PreparedRounding& prep, Rng& rng,
                               const RoundConfig& config);

// The full rounding pipeline. Cost and degree preservation hold on every
// run; concentration_ok reports whether every deviation met its bound,
// re-randomizing up to config.max_retries times and keeping the attempt
// with the smallest maximum normalized deviation.
RoundingOutcome dependent_round(const core::RoundingInstance& inst, Rng& rng,
                                const RoundConfig& config = {});

}  // namespace drr::treemerge
