#pragma once

#include "drr/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace drr::core {

// Bipartite graph with dense edge ids 0..|E|-1. Vertices carry global ids:
// left side first (0..|A|-1), then right side (|A|..|A|+|B|-1). The edge
// order is load-bearing: ids are stable across the whole pipeline and every
// deterministic tie-break refers to them.
class BipartiteGraph {
public:
    struct Edge {
        int left;   // global vertex id on side A
        int right;  // global vertex id on side B
    };

    BipartiteGraph() = default;
    BipartiteGraph(std::vector<std::string> left_names,
                   std::vector<std::string> right_names,
                   std::vector<Edge> edges);

    // Convenience builder with synthetic names a0..,b0.. and edges given as
    // (left index, right index) pairs.
    static BipartiteGraph make(int num_left, int num_right,
                               const std::vector<std::pair<int, int>>& edges);

    int num_left() const { return static_cast<int>(left_names_.size()); }
    int num_right() const { return static_cast<int>(right_names_.size()); }
    int num_vertices() const { return num_left() + num_right(); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    bool is_left(int v) const { return v < num_left(); }

    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& star(int v) const { return stars_[v]; }
    const std::string& vertex_name(int v) const;
    const std::vector<std::string>& left_names() const { return left_names_; }
    const std::vector<std::string>& right_names() const { return right_names_; }
    // Global vertex id by name; -1 when absent.
    int find_vertex(const std::string& name) const;

private:
    std::vector<std::string> left_names_;
    std::vector<std::string> right_names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> stars_;  // per global vertex id
};

// Dense 0/1 edge set over a graph's edge ids.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(int num_edges) : n_(num_edges), words_((num_edges + 63) / 64, 0) {}

    int size() const { return n_; }
    bool test(int e) const { return (words_[e >> 6] >> (e & 63)) & 1u; }
    void set(int e, bool value) {
        std::uint64_t mask = std::uint64_t(1) << (e & 63);
        if (value) words_[e >> 6] |= mask; else words_[e >> 6] &= ~mask;
    }
    void flip(int e) { words_[e >> 6] ^= std::uint64_t(1) << (e & 63); }

    int count() const;
    // Number of set edges among the given edge ids (a vertex star, usually).
    int count_in(const std::vector<int>& edge_ids) const;
    std::vector<int> members() const;

    EdgeSet sym_diff(const EdgeSet& o) const;

    friend bool operator==(const EdgeSet& a, const EdgeSet& b) = default;
    // Canonical bit-pattern order used wherever sets get sorted.
    std::strong_ordering operator<=>(const EdgeSet& o) const;

    std::string bits_string() const;  // e.g. "0110", edge 0 first

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

// Linear function a with supp(a) inside one vertex's edge star and
// coefficients in [0,1].
struct LinearFunction {
    int anchor_vertex = -1;
    std::map<int, Rat> coeffs;  // edge id -> coefficient

    Rat value_of(const std::vector<Rat>& x) const;
    Rat value_of(const EdgeSet& s) const;
};

struct RoundingInstance {
    BipartiteGraph graph;
    std::vector<Rat> x;  // fractional assignment, per edge id
    std::vector<Rat> c;  // cost, per edge id (negatives allowed)
    std::vector<LinearFunction> funcs;

    Rat cost_of(const std::vector<Rat>& point) const;
    Rat cost_of(const EdgeSet& s) const;
    bool x_integral() const;
};

struct DegreeBounds {
    // Per global vertex id: floor / ceil of x(delta(v)).
    std::vector<mpz_class> lo;
    std::vector<mpz_class> hi;

    bool admits(const BipartiteGraph& g, const EdgeSet& s) const;
};

struct ConvexCombination {
    struct Term {
        Rat lambda;  // in (0, 1]
        EdgeSet set;
    };
    std::vector<Term> terms;

    // Exact weighted sum of the member sets.
    std::vector<Rat> value(int num_edges) const;
    Rat lambda_sum() const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const RoundingInstance& inst);
DegreeBounds degree_bounds(const RoundingInstance& inst);

// Exact dot product helpers over dense edge vectors.
Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b);
Rat dot(const std::vector<Rat>& a, const EdgeSet& s);

}  // namespace drr::core
