#include "drr/harness.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace drr::harness {

using core::EdgeSet;

std::vector<EdgeSet> enumerate_degree_preserving_sets(const core::RoundingInstance& inst) {
    const int E = inst.graph.num_edges();
    if (E > 22) throw std::length_error("too large");
    const int V = inst.graph.num_vertices();
    core::DegreeBounds bounds = core::degree_bounds(inst);
    std::vector<std::uint32_t> vmask(V, 0);
    std::vector<int> lo(V), hi(V);
    for (int v = 0; v < V; ++v) {
        for (int e : inst.graph.star(v)) vmask[v] |= std::uint32_t(1) << e;
        lo[v] = static_cast<int>(bounds.lo[v].get_si());
        hi[v] = static_cast<int>(bounds.hi[v].get_si());
    }
    std::vector<EdgeSet> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << E); ++mask) {
        bool ok = true;
        for (int v = 0; v < V && ok; ++v) {
            int d = std::popcount(mask & vmask[v]);
            ok = d >= lo[v] && d <= hi[v];
        }
        if (!ok) continue;
        EdgeSet s(E);
        for (int e = 0; e < E; ++e)
            if (mask & (std::uint32_t(1) << e)) s.set(e, true);
        out.push_back(std::move(s));
    }
    return out;
}

BruteForceSanta brute_force_santa(const santa::SantaInstance& inst) {
    const int m = inst.players;
    const int n = inst.num_resources();
    double states = 1;
    for (int j = 0; j < n; ++j) {
        states *= m + 1;
        if (states > 1e7) throw std::length_error("too large");
    }
    BruteForceSanta best;
    best.opt_value = Rat(0);
    best.witness.assign(m, {});

    std::vector<int> owner(n, -1);  // -1 = unassigned
    std::vector<Rat> player_value(m), player_cost;
    Rat total_cost;

    // Depth-first over resources; prune on budget.
    std::vector<std::vector<int>> alloc(m);
    auto consider = [&]() {
        Rat v = player_value.empty() ? Rat(0) : player_value[0];
        for (const Rat& pv : player_value) v = drr::min(v, pv);
        if (v > best.opt_value) {
            best.opt_value = v;
            best.witness = alloc;
        }
    };
    auto rec = [&](auto&& self, int j) -> void {
        if (total_cost > inst.budget) return;
        if (j == n) {
            consider();
            return;
        }
        self(self, j + 1);  // leave j unassigned
        for (int i = 0; i < m; ++i) {
            total_cost += inst.costs[i][j];
            player_value[i] += inst.values[j];
            alloc[i].push_back(j);
            self(self, j + 1);
            alloc[i].pop_back();
            player_value[i] -= inst.values[j];
            total_cost -= inst.costs[i][j];
        }
    };
    rec(rec, 0);
    return best;
}

ConcentrationReport measure_concentration(const core::RoundingInstance& inst, int trials,
                                          Rng& rng, const Rat& c0) {
    treemerge::PreparedRounding prep = treemerge::prepare_rounding(inst, c0);
    treemerge::RoundConfig config;
    config.c0 = c0;
    config.max_retries = 0;

    ConcentrationReport report;
    report.trials = trials;
    const std::size_t k = inst.funcs.size();
    report.functions.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        report.functions[j].a_dot_x = prep.a_dot_x[j];
        report.functions[j].bound = prep.bounds[j];
        report.functions[j].deviations.reserve(trials);
    }
    for (int t = 0; t < trials; ++t) {
        Rng stream = rng.split();
        treemerge::RoundingOutcome out = treemerge::round_prepared(inst, prep, stream, config);
        for (std::size_t j = 0; j < k; ++j)
            report.functions[j].deviations.push_back(out.deviations[j]);
    }
    for (std::size_t j = 0; j < k; ++j) {
        auto& f = report.functions[j];
        std::vector<Rat> sorted = f.deviations;
        std::sort(sorted.begin(), sorted.end());
        long violations = 0;
        for (const Rat& d : f.deviations)
            if (d > f.bound) ++violations;
        f.violation_rate = trials > 0 ? Rat(violations, trials) : Rat(0);
        if (!sorted.empty()) {
            auto quantile = [&](double q) {
                std::size_t idx = static_cast<std::size_t>(q * (sorted.size() - 1));
                return sorted[idx];
            };
            f.q50 = quantile(0.50);
            f.q90 = quantile(0.90);
            f.q99 = quantile(0.99);
            f.max_dev = sorted.back();
        }
    }
    return report;
}

bool OutcomeReport::ok() const {
    return std::all_of(items.begin(), items.end(), [](const Item& it) { return it.pass; });
}

OutcomeReport verify_outcome(const core::RoundingInstance& inst, const EdgeSet& X,
                             const Rat& c0) {
    OutcomeReport rep;
    if (X.size() != inst.graph.num_edges()) {
        rep.items.push_back({"shape", false, "outcome has " + std::to_string(X.size()) +
                                                 " edges, instance has " +
                                                 std::to_string(inst.graph.num_edges())});
        return rep;
    }
    rep.items.push_back({"shape", true, ""});

    const Rat cx = core::dot(inst.c, inst.x);
    const Rat cX = core::dot(inst.c, X);
    rep.items.push_back({"cost_preservation", cX <= cx,
                         "c.X = " + cX.str() + ", c.x = " + cx.str()});

    core::DegreeBounds bounds = core::degree_bounds(inst);
    bool degrees_ok = true;
    std::string degree_detail;
    for (int v = 0; v < inst.graph.num_vertices(); ++v) {
        mpz_class d(X.count_in(inst.graph.star(v)));
        if (d < bounds.lo[v] || d > bounds.hi[v]) {
            degrees_ok = false;
            degree_detail = "vertex " + inst.graph.vertex_name(v) + " degree " + d.get_str() +
                            " outside [" + bounds.lo[v].get_str() + ", " +
                            bounds.hi[v].get_str() + "]";
            break;
        }
    }
    rep.items.push_back({"degree_preservation", degrees_ok, degree_detail});

    bool conc_ok = true;
    std::string conc_detail;
    for (std::size_t j = 0; j < inst.funcs.size(); ++j) {
        Rat ax = inst.funcs[j].value_of(inst.x);
        Rat dev = abs(inst.funcs[j].value_of(X) - ax);
        Rat bound = treemerge::concentration_bound(ax, inst.funcs.size(), c0);
        if (dev > bound) {
            conc_ok = false;
            conc_detail = "function " + std::to_string(j + 1) + " deviation " + dev.str() +
                          " exceeds " + bound.str();
            break;
        }
    }
    rep.items.push_back({"concentration", conc_ok, conc_detail});
    return rep;
}

}  // namespace drr::harness
