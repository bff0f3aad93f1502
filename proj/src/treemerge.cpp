#include "drr/treemerge.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace drr::treemerge {

using core::BipartiteGraph;
using core::EdgeSet;

namespace {

// Difference subgraph bookkeeping with deterministic iteration order:
// adjacency lists hold edge ids ascending (graph stars are built in edge id
// order already).
struct DiffGraph {
    const BipartiteGraph& graph;
    std::vector<char> alive;  // per edge id
    std::vector<int> degree;  // per vertex

    DiffGraph(const BipartiteGraph& g, const EdgeSet& diff)
        : graph(g), alive(g.num_edges(), 0), degree(g.num_vertices(), 0) {
        for (int e = 0; e < g.num_edges(); ++e) {
            if (diff.test(e)) {
                alive[e] = 1;
                ++degree[g.edge(e).left];
                ++degree[g.edge(e).right];
            }
        }
    }

    void remove(int e) {
        alive[e] = 0;
        --degree[graph.edge(e).left];
        --degree[graph.edge(e).right];
    }

    int other_end(int e, int v) const {
        const auto& ed = graph.edge(e);
        return ed.left == v ? ed.right : ed.left;
    }

    // Smallest-id alive edge at v excluding `skip`; -1 if none.
    int next_edge(int v, int skip = -1) const {
        for (int e : graph.star(v))
            if (alive[e] && e != skip) return e;
        return -1;
    }
};

// DFS for one simple cycle in the alive subgraph; edges in traversal order.
std::vector<int> find_cycle(DiffGraph& dg) {
    const int V = dg.graph.num_vertices();
    for (int start = 0; start < V; ++start) {
        if (dg.degree[start] < 2) continue;
        // Iterative DFS over the component of `start`; on_stack tracks the
        // current vertex path so a back edge closes a simple cycle.
        std::vector<int> parent_edge(V, -1);
        std::vector<char> visited(V, 0), on_stack(V, 0);
        std::vector<std::pair<int, int>> stack;  // (vertex, star cursor)
        stack.push_back({start, 0});
        visited[start] = on_stack[start] = 1;
        while (!stack.empty()) {
            auto& [v, cursor] = stack.back();
            const auto& star = dg.graph.star(v);
            bool advanced = false;
            while (cursor < static_cast<int>(star.size())) {
                int e = star[cursor++];
                if (!dg.alive[e] || e == parent_edge[v]) continue;
                int w = dg.other_end(e, v);
                if (on_stack[w]) {
                    // Close the cycle w -> ... -> v -> w.
                    std::vector<int> cycle{e};
                    int cur = v;
                    while (cur != w) {
                        cycle.push_back(parent_edge[cur]);
                        cur = dg.other_end(parent_edge[cur], cur);
                    }
                    std::reverse(cycle.begin(), cycle.end());
                    return cycle;
                }
                if (!visited[w]) {
                    visited[w] = on_stack[w] = 1;
                    parent_edge[w] = e;
                    stack.push_back({w, 0});
                    advanced = true;
                    break;
                }
            }
            if (!advanced && cursor >= static_cast<int>(dg.graph.star(v).size())) {
                on_stack[v] = 0;
                stack.pop_back();
            }
        }
    }
    return {};
}

}  // namespace

std::vector<Piece> decompose_symmetric_difference(const BipartiteGraph& graph,
                                                  const EdgeSet& s1, const EdgeSet& s2) {
    DiffGraph dg(graph, s1.sym_diff(s2));
    std::vector<Piece> pieces;

    // Cycles first; what remains is a forest.
    for (;;) {
        std::vector<int> cycle = find_cycle(dg);
        if (cycle.empty()) break;
        for (int e : cycle) dg.remove(e);
        pieces.push_back({std::move(cycle), true});
    }
    // Maximal paths, each started at the smallest-id current leaf. Path ends
    // are degree-1 vertices, which are exactly the odd-degree vertices of
    // the original difference (cycle and path removal preserve parity).
    for (;;) {
        int leaf = -1;
        for (int v = 0; v < graph.num_vertices(); ++v)
            if (dg.degree[v] == 1) { leaf = v; break; }
        if (leaf < 0) break;
        std::vector<int> path;
        int v = leaf, arrived = -1;
        for (;;) {
            int e = dg.next_edge(v, arrived);
            if (e < 0) break;
            path.push_back(e);
            v = dg.other_end(e, v);
            arrived = e;
            if (dg.degree[v] == 1) break;  // reached the far leaf
        }
        for (int e : path) dg.remove(e);
        pieces.push_back({std::move(path), false});
    }

    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
        return *std::min_element(a.edges.begin(), a.edges.end()) <
               *std::min_element(b.edges.begin(), b.edges.end());
    });
    return pieces;
}

PairMergeResult pair_merge(const BipartiteGraph& graph, const EdgeSet& s1, const EdgeSet& s2,
                           Rng& rng) {
    if (s1.size() != s2.size() || s1.size() != graph.num_edges())
        throw std::invalid_argument("edge sets over different graphs");
    PairMergeResult res;
    res.t = EdgeSet(graph.num_edges());
    res.t_prime = EdgeSet(graph.num_edges());
    for (int e = 0; e < graph.num_edges(); ++e) {
        if (s1.test(e) == s2.test(e)) {
            res.t.set(e, s1.test(e));
            res.t_prime.set(e, s1.test(e));
        }
    }
    res.pieces = decompose_symmetric_difference(graph, s1, s2);
    for (const Piece& piece : res.pieces) {
        // Alternation classes along the traversal; class C is the one
        // holding the piece's smallest edge id.
        const auto min_it = std::min_element(piece.edges.begin(), piece.edges.end());
        const int min_pos = static_cast<int>(min_it - piece.edges.begin());
        const bool coin = rng.coin();
        res.coins.push_back(coin);
        for (std::size_t pos = 0; pos < piece.edges.size(); ++pos) {
            const bool in_c = (static_cast<int>(pos) - min_pos) % 2 == 0;
            // coin == false: C goes to T.  coin == true: C goes to T'.
            const bool to_t = in_c != coin;
            (to_t ? res.t : res.t_prime).set(piece.edges[pos], true);
        }
    }
    return res;
}

namespace {

struct Runs {
    std::vector<MergeTrace::Run> runs;

    void append(const EdgeSet& set, std::uint64_t count) {
        if (count == 0) return;
        if (!runs.empty() && runs.back().set == set) runs.back().count += count;
        else runs.push_back({set, count});
    }
};

Rat runs_cost(const std::vector<MergeTrace::Run>& runs, std::map<EdgeSet, Rat>& cost_cache,
              const std::vector<Rat>& costs) {
    Rat total;
    for (const auto& run : runs) {
        auto it = cost_cache.find(run.set);
        if (it == cost_cache.end()) it = cost_cache.emplace(run.set, core::dot(costs, run.set)).first;
        total += it->second * Rat(mpz_class(static_cast<unsigned long>(run.count)));
    }
    return total;
}

std::vector<Rat> runs_average(const std::vector<MergeTrace::Run>& runs, int num_edges,
                              long level) {
    std::vector<Rat> y(num_edges);
    for (const auto& run : runs) {
        Rat w = Rat(mpz_class(static_cast<unsigned long>(run.count))) / pow2(level);
        for (int e = 0; e < num_edges; ++e)
            if (run.set.test(e)) y[e] += w;
    }
    return y;
}

}  // namespace

TreeMergeResult tree_merge(const BipartiteGraph& graph,
                           const decompose::DyadicCombination& dyadic,
                           const std::vector<Rat>& costs, Rng& rng, bool want_trace) {
    const long ell = dyadic.level;
    const Rat scale = pow2(ell);

    // Leaf labels: h_i copies of each set, sorted by bit pattern.
    std::vector<std::pair<EdgeSet, std::uint64_t>> leaves;
    mpz_class total = 0;
    for (const auto& term : dyadic.terms) {
        Rat h = term.lambda * scale;
        if (!h.is_integer()) throw std::invalid_argument("combination is not dyadic at this level");
        if (h.is_zero()) continue;
        total += h.num();
        leaves.emplace_back(term.set, static_cast<std::uint64_t>(h.num().get_ui()));
    }
    if (Rat(total) != scale) throw std::invalid_argument("dyadic scalars do not sum to 1");
    std::sort(leaves.begin(), leaves.end());

    std::map<EdgeSet, Rat> cost_cache;
    MergeTrace trace;
    Runs level_runs;
    for (auto& [set, count] : leaves) level_runs.append(set, count);

    auto record = [&](int level, bool chose_prime, const std::vector<bool>& coins,
                      const Rat& cost) {
        if (!want_trace) return;
        MergeTrace::Level lv;
        lv.level = level;
        lv.labels = level_runs.runs;
        lv.chose_prime = chose_prime;
        lv.coins = coins;
        lv.cost = cost;
        lv.y = runs_average(level_runs.runs, graph.num_edges(), level);
        trace.levels.push_back(std::move(lv));
    };

    record(static_cast<int>(ell), false, {},
           runs_cost(level_runs.runs, cost_cache, costs) / scale);

    for (long j = ell - 1; j >= 0; --j) {
        // Pair up consecutive labels; a run with an odd remainder donates its
        // last label to a boundary pair with the next run.
        struct Slot {
            EdgeSet a, b;
            std::uint64_t pairs;
            bool merged;          // a != b, randomized
            EdgeSet t, t_prime;   // filled for merged slots
        };
        std::vector<Slot> slots;
        std::vector<bool> coins;
        const EdgeSet* carry = nullptr;
        for (const auto& run : level_runs.runs) {
            std::uint64_t c = run.count;
            if (carry) {
                Slot s{*carry, run.set, 1, true, {}, {}};
                PairMergeResult pm = pair_merge(graph, *carry, run.set, rng);
                coins.insert(coins.end(), pm.coins.begin(), pm.coins.end());
                s.t = std::move(pm.t);
                s.t_prime = std::move(pm.t_prime);
                slots.push_back(std::move(s));
                carry = nullptr;
                --c;
            }
            if (c >= 2) slots.push_back({run.set, run.set, c / 2, false, {}, {}});
            if (c % 2) carry = &run.set;
        }
        if (carry) throw std::logic_error("odd label count below the leaf level");

        Rat cost_t, cost_tp;
        auto side_cost = [&](bool prime) {
            Rat total_cost;
            for (const auto& s : slots) {
                const EdgeSet& lbl = s.merged ? (prime ? s.t_prime : s.t) : s.a;
                auto it = cost_cache.find(lbl);
                if (it == cost_cache.end())
                    it = cost_cache.emplace(lbl, core::dot(costs, lbl)).first;
                total_cost += it->second * Rat(mpz_class(static_cast<unsigned long>(s.pairs)));
            }
            return total_cost;
        };
        cost_t = side_cost(false);
        cost_tp = side_cost(true);
        const bool chose_prime = cost_tp < cost_t;

        Runs next;
        for (const auto& s : slots)
            next.append(s.merged ? (chose_prime ? s.t_prime : s.t) : s.a, s.pairs);
        level_runs = std::move(next);
        record(static_cast<int>(j), chose_prime, coins,
               drr::min(cost_t, cost_tp) / pow2(j));
    }

    if (level_runs.runs.size() != 1 || level_runs.runs[0].count != 1)
        throw std::logic_error("merge tree did not converge to a single label");
    TreeMergeResult out;
    out.root = level_runs.runs[0].set;
    if (want_trace) out.trace = std::move(trace);
    return out;
}

Rat concentration_bound(const Rat& aTx, std::size_t num_funcs, const Rat& c0) {
    const std::size_t k_hat = std::max<std::size_t>(num_funcs, 2);
    const Rat L = log2_lower(mpz_class(static_cast<unsigned long>(k_hat)));
    return c0 * drr::max(L, sqrt_lower(aTx * L));
}

PreparedRounding prepare_rounding(const core::RoundingInstance& inst, const Rat& c0) {
    core::ValidationReport rep = core::validate_instance(inst);
    if (!rep.ok()) {
        std::string msg = "invalid instance:";
        for (const auto& v : rep.violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }

    PreparedRounding prep;
    const std::size_t k = inst.funcs.size();
    prep.a_dot_x.resize(k);
    prep.bounds.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        prep.a_dot_x[j] = inst.funcs[j].value_of(inst.x);
        prep.bounds[j] = concentration_bound(prep.a_dot_x[j], k, c0);
    }
    prep.cost_fractional = core::dot(inst.c, inst.x);

    if (inst.x_integral()) {
        prep.integral = true;
        prep.integral_set = EdgeSet(inst.graph.num_edges());
        for (int e = 0; e < inst.graph.num_edges(); ++e)
            if (inst.x[e] == Rat(1)) prep.integral_set.set(e, true);
        return prep;
    }

    prep.reduced = decompose::solve_reduced(inst);
    const long ell = decompose::choose_level(prep.reduced.combination.terms.size(), k);
    prep.dyadic = decompose::round_scalars(prep.reduced.combination, inst.c, ell);
    std::erase_if(prep.dyadic.terms,
                  [](const decompose::DyadicCombination::Term& t) { return t.lambda.is_zero(); });
    return prep;
}

RoundingOutcome round_prepared(const core::RoundingInstance& inst, const PreparedRounding& prep,
                               Rng& rng, const RoundConfig& config) {
    const std::size_t k = inst.funcs.size();
    RoundingOutcome out;
    out.bounds = prep.bounds;
    out.cost_fractional = prep.cost_fractional;

    if (prep.integral) {
        out.X = prep.integral_set;
        out.deviations.assign(k, Rat(0));
        out.cost_integral = out.cost_fractional;
        if (config.want_trace) {
            MergeTrace tr;
            tr.levels.push_back({0, {{out.X, 1}}, false, inst.x, out.cost_fractional, {}});
            out.trace = std::move(tr);
        }
        return out;
    }

    std::optional<Rat> best_score;
    const int attempts = 1 + std::max(config.max_retries, 0);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Rng stream = rng.split();
        TreeMergeResult merged =
            tree_merge(inst.graph, prep.dyadic, inst.c, stream, config.want_trace);
        std::vector<Rat> devs(k);
        Rat score;
        bool ok = true;
        for (std::size_t j = 0; j < k; ++j) {
            devs[j] = abs(inst.funcs[j].value_of(merged.root) - prep.a_dot_x[j]);
            Rat normalized = devs[j] / out.bounds[j];
            if (normalized > score) score = normalized;
            if (devs[j] > out.bounds[j]) ok = false;
        }
        out.retries_used = attempt;
        if (!best_score || score < *best_score) {
            best_score = score;
            out.X = merged.root;
            out.trace = std::move(merged.trace);
            out.deviations = std::move(devs);
            out.concentration_ok = ok;
        }
        if (ok) break;
    }
    out.cost_integral = core::dot(inst.c, out.X);

    // The two deterministic clauses are theorems of the construction; fail
    // loudly rather than return a wrong answer if they are ever violated.
    if (out.cost_integral > out.cost_fractional)
        throw std::logic_error("cost preservation violated");
    if (!prep.reduced.bounds.admits(inst.graph, out.X))
        throw std::logic_error("degree preservation violated");
    return out;
}

RoundingOutcome dependent_round(const core::RoundingInstance& inst, Rng& rng,
                                const RoundConfig& config) {
    PreparedRounding prep = prepare_rounding(inst, config.c0);
    return round_prepared(inst, prep, rng, config);
}

}  // namespace drr::treemerge
