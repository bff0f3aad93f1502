#include "drr/santa.hpp"

#include "drr/flow.hpp"

#include <algorithm>
#include <set>

namespace drr::santa {

using core::BipartiteGraph;
using core::EdgeSet;
using core::LinearFunction;
using core::RoundingInstance;

std::vector<std::string> validate_instance(const SantaInstance& inst) {
    std::vector<std::string> errs;
    if (inst.players < 1) errs.push_back("players must be >= 1");
    if (static_cast<int>(inst.costs.size()) != inst.players)
        errs.push_back("costs must have one row per player");
    for (std::size_t i = 0; i < inst.costs.size(); ++i) {
        if (inst.costs[i].size() != inst.values.size())
            errs.push_back("costs row " + std::to_string(i) + " has wrong length");
        for (const Rat& c : inst.costs[i])
            if (c.sign() < 0) errs.push_back("negative cost for player " + std::to_string(i));
    }
    for (std::size_t j = 0; j < inst.values.size(); ++j)
        if (inst.values[j].sign() < 0)
            errs.push_back("negative value for resource " + std::to_string(j));
    if (inst.budget.sign() < 0) errs.push_back("negative budget");
    return errs;
}

ThresholdPartition partition_resources(const SantaInstance& inst, const Rat& threshold,
                                       const Rat& alpha) {
    ThresholdPartition part;
    part.threshold = threshold;
    part.alpha = alpha;
    const Rat cutoff = threshold / alpha;
    for (int j = 0; j < inst.num_resources(); ++j) {
        if (inst.values[j] >= cutoff) part.big.push_back(j);
        else part.small.push_back(j);
    }
    return part;
}

exactlp::LinearProgram build_lp(const SantaInstance& inst, const ThresholdPartition& part) {
    const int m = inst.players;
    const int B = static_cast<int>(part.big.size());
    const int S = static_cast<int>(part.small.size());
    exactlp::LinearProgram lp;
    // x_ib: i * B + bpos;  z_is: m * B + i * S + spos.
    for (int i = 0; i < m * B + m * S; ++i) lp.add_variable(Rat(0), std::nullopt);
    auto xv = [&](int i, int bpos) { return i * B + bpos; };
    auto zv = [&](int i, int spos) { return m * B + i * S + spos; };

    // Value covering: sum_s v_s z_is + T sum_b x_ib >= T.
    for (int i = 0; i < m; ++i) {
        std::map<int, Rat> row;
        for (int sp = 0; sp < S; ++sp) {
            const Rat& v = inst.values[part.small[sp]];
            if (!v.is_zero()) row[zv(i, sp)] = v;
        }
        if (!part.threshold.is_zero())
            for (int bp = 0; bp < B; ++bp) row[xv(i, bp)] = part.threshold;
        lp.add_constraint(std::move(row), exactlp::Relation::ge, part.threshold);
    }
    // A player holding a big resource gets no smalls: z_is + sum_b x_ib <= 1.
    for (int sp = 0; sp < S; ++sp)
        for (int i = 0; i < m; ++i) {
            std::map<int, Rat> row;
            row[zv(i, sp)] = Rat(1);
            for (int bp = 0; bp < B; ++bp) row[xv(i, bp)] = Rat(1);
            lp.add_constraint(std::move(row), exactlp::Relation::le, Rat(1));
        }
    // Each big resource at most once.
    for (int bp = 0; bp < B; ++bp) {
        std::map<int, Rat> row;
        for (int i = 0; i < m; ++i) row[xv(i, bp)] = Rat(1);
        lp.add_constraint(std::move(row), exactlp::Relation::le, Rat(1));
    }
    // Each small resource at most once.
    for (int sp = 0; sp < S; ++sp) {
        std::map<int, Rat> row;
        for (int i = 0; i < m; ++i) row[zv(i, sp)] = Rat(1);
        lp.add_constraint(std::move(row), exactlp::Relation::le, Rat(1));
    }
    // Each player at most one big resource.
    for (int i = 0; i < m; ++i) {
        std::map<int, Rat> row;
        for (int bp = 0; bp < B; ++bp) row[xv(i, bp)] = Rat(1);
        lp.add_constraint(std::move(row), exactlp::Relation::le, Rat(1));
    }

    std::map<int, Rat> obj;
    for (int i = 0; i < m; ++i) {
        for (int bp = 0; bp < B; ++bp) {
            const Rat& c = inst.costs[i][part.big[bp]];
            if (!c.is_zero()) obj[xv(i, bp)] = c;
        }
        for (int sp = 0; sp < S; ++sp) {
            const Rat& c = inst.costs[i][part.small[sp]];
            if (!c.is_zero()) obj[zv(i, sp)] = c;
        }
    }
    lp.set_objective(std::move(obj), exactlp::Sense::minimize);
    return lp;
}

LpSolutionTZ extract_lp_solution(const SantaInstance& inst, const ThresholdPartition& part,
                                 const exactlp::VertexSolution& sol) {
    const int m = inst.players;
    const int B = static_cast<int>(part.big.size());
    const int S = static_cast<int>(part.small.size());
    LpSolutionTZ out;
    out.x.assign(m, std::vector<Rat>(B));
    out.z.assign(m, std::vector<Rat>(S));
    out.y.assign(m, Rat(1));
    for (int i = 0; i < m; ++i) {
        for (int bp = 0; bp < B; ++bp) {
            out.x[i][bp] = sol.values[i * B + bp];
            out.y[i] -= out.x[i][bp];
        }
        for (int sp = 0; sp < S; ++sp) out.z[i][sp] = sol.values[m * B + i * S + sp];
    }
    out.objective = sol.objective_value;
    return out;
}

BigRoundingResult round_big(const LpSolutionTZ& lp_sol, const SantaInstance& inst,
                            const ThresholdPartition& part, Rng& rng,
                            const treemerge::RoundConfig& config) {
    const int m = inst.players;
    const int B = static_cast<int>(part.big.size());
    const int S = static_cast<int>(part.small.size());

    // Player / (big + dummy) selection graph. Edge (i,b) where x_ib > 0 with
    // cost c_ib; edge (i,d) where y_i > 0 with the player's fractional
    // small-bundle cost, so the graph's cost function carries the whole LP
    // objective.
    std::vector<std::string> left(m), right(B + 1);
    for (int i = 0; i < m; ++i) left[i] = "p" + std::to_string(i);
    for (int bp = 0; bp < B; ++bp) right[bp] = "r" + std::to_string(part.big[bp]);
    right[B] = "d";

    std::vector<BipartiteGraph::Edge> edges;
    std::vector<Rat> x, c;
    std::vector<std::pair<int, int>> edge_role;  // (player, bpos) or (player, -1) for dummy
    for (int i = 0; i < m; ++i) {
        for (int bp = 0; bp < B; ++bp) {
            if (lp_sol.x[i][bp].sign() > 0) {
                edges.push_back({i, m + bp});
                x.push_back(lp_sol.x[i][bp]);
                c.push_back(inst.costs[i][part.big[bp]]);
                edge_role.push_back({i, bp});
            }
        }
        if (lp_sol.y[i].sign() > 0) {
            edges.push_back({i, m + B});
            x.push_back(lp_sol.y[i]);
            Rat bundle;
            for (int sp = 0; sp < S; ++sp)
                bundle += inst.costs[i][part.small[sp]] * (lp_sol.z[i][sp] / lp_sol.y[i]);
            c.push_back(std::move(bundle));
            edge_role.push_back({i, -1});
        }
    }

    RoundingInstance rinst;
    rinst.graph = BipartiteGraph(std::move(left), std::move(right), std::move(edges));
    rinst.x = std::move(x);
    rinst.c = std::move(c);

    const int dummy_vertex = m + B;
    std::vector<int> dummy_edge(m, -1);
    for (int e = 0; e < rinst.graph.num_edges(); ++e)
        if (edge_role[e].second < 0) dummy_edge[edge_role[e].first] = e;

    // One linear function per small resource: coefficient z_is / y_i on the
    // player's dummy edge.
    for (int sp = 0; sp < S; ++sp) {
        LinearFunction f;
        f.anchor_vertex = dummy_vertex;
        for (int i = 0; i < m; ++i) {
            if (dummy_edge[i] < 0) continue;
            if (lp_sol.z[i][sp].sign() > 0)
                f.coeffs[dummy_edge[i]] = lp_sol.z[i][sp] / lp_sol.y[i];
        }
        rinst.funcs.push_back(std::move(f));
    }

    treemerge::RoundingOutcome outcome = treemerge::dependent_round(rinst, rng, config);

    BigRoundingResult res;
    res.X.assign(m, std::vector<char>(B, 0));
    res.Y.assign(m, 0);
    for (int e = 0; e < rinst.graph.num_edges(); ++e) {
        if (!outcome.X.test(e)) continue;
        auto [i, bp] = edge_role[e];
        if (bp < 0) res.Y[i] = 1;
        else res.X[i][bp] = 1;
    }
    res.z_prime.assign(m, std::vector<Rat>(S));
    for (int i = 0; i < m; ++i) {
        if (!res.Y[i]) continue;
        for (int sp = 0; sp < S; ++sp)
            if (lp_sol.z[i][sp].sign() > 0) res.z_prime[i][sp] = lp_sol.z[i][sp] / lp_sol.y[i];
    }
    res.beta = Rat(1);
    Rat max_dev;
    for (const Rat& d : outcome.deviations) max_dev = drr::max(max_dev, d);
    res.beta += max_dev;
    res.total_cost = outcome.cost_integral;
    res.concentration_ok = outcome.concentration_ok;
    res.retries_used = outcome.retries_used;

    // Lemma 3.1 deterministic clauses.
    if (res.total_cost > lp_sol.objective) throw std::logic_error("big rounding raised the cost");
    for (int i = 0; i < m; ++i) {
        int picks = res.Y[i] ? 1 : 0;
        for (int bp = 0; bp < B; ++bp) picks += res.X[i][bp];
        if (picks != 1) throw std::logic_error("player coverage violated by big rounding");
    }
    for (int bp = 0; bp < B; ++bp) {
        int uses = 0;
        for (int i = 0; i < m; ++i) uses += res.X[i][bp];
        if (uses > 1) throw std::logic_error("big resource assigned twice");
    }
    return res;
}

std::map<std::pair<int, int>, char> round_small(
    const std::vector<std::vector<Rat>>& z_prime, const std::vector<int>& q_players,
    const Rat& beta, const SantaInstance& inst, const ThresholdPartition& part,
    bool expect_two_copies) {
    std::map<std::pair<int, int>, char> result;
    if (q_players.empty()) return result;
    if (beta < Rat(1)) throw std::invalid_argument("beta must be >= 1");
    const int S = static_cast<int>(part.small.size());

    // Small resources sorted by value, non-increasing; ties by resource id.
    std::vector<int> order(S);
    for (int sp = 0; sp < S; ++sp) order[sp] = sp;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Rat &va = inst.values[part.small[a]], &vb = inst.values[part.small[b]];
        if (va != vb) return vb < va;
        return part.small[a] < part.small[b];
    });

    struct Copy {
        int player;
        int first_pos, last_pos;  // inclusive range in sorted positions
    };
    std::vector<Copy> copies;
    std::vector<std::vector<Rat>> witness;  // per copy: extent per covered position

    for (int i : q_players) {
        // Prefix sums of z'' = z'/beta over the sorted positions.
        std::vector<Rat> prefix(S + 1);
        for (int pos = 0; pos < S; ++pos)
            prefix[pos + 1] = prefix[pos] + z_prime[i][order[pos]] / beta;
        const mpz_class copies_count = prefix[S].floor();
        if (expect_two_copies && copies_count < 2)
            throw std::logic_error("player with fewer than two copies in small rounding");
        int prev_break = 0;  // s(i, l-1) as a sorted position
        for (mpz_class l = 1; l <= copies_count; ++l) {
            const Rat level(l);
            int pos = prev_break;
            while (prefix[pos + 1] < level) ++pos;
            Copy cp{i, prev_break, pos};
            // Witness extent: z'' mass strictly between cumulative levels
            // l-1 and l; exactly the proof's fractional matching.
            std::vector<Rat> w;
            for (int p = cp.first_pos; p <= cp.last_pos; ++p) {
                Rat hi = drr::min(prefix[p + 1], level);
                Rat lo = drr::max(prefix[p], level - Rat(1));
                w.push_back(drr::max(hi - lo, Rat(0)));
            }
            witness.push_back(std::move(w));
            copies.push_back(cp);
            prev_break = pos;
        }
    }
    if (copies.empty()) return result;

    // Validate the witness before matching: copies sum to one, positions
    // never exceed their z'' mass or load one.
    std::vector<Rat> pos_load(S);
    for (std::size_t ci = 0; ci < copies.size(); ++ci) {
        Rat total;
        for (std::size_t k = 0; k < witness[ci].size(); ++k) {
            total += witness[ci][k];
            pos_load[copies[ci].first_pos + static_cast<int>(k)] += witness[ci][k];
        }
        if (total != Rat(1)) throw std::logic_error("fractional matching witness violated");
    }
    for (int pos = 0; pos < S; ++pos)
        if (pos_load[pos] > Rat(1)) throw std::logic_error("fractional matching witness violated");

    // Copy graph and min-weight left-perfect matching.
    const int L = static_cast<int>(copies.size());
    std::vector<std::pair<int, int>> gedges;
    std::vector<Rat> weights;
    std::vector<int> edge_pos;
    for (int ci = 0; ci < L; ++ci)
        for (int pos = copies[ci].first_pos; pos <= copies[ci].last_pos; ++pos) {
            gedges.push_back({ci, pos});
            weights.push_back(inst.costs[copies[ci].player][part.small[order[pos]]]);
            edge_pos.push_back(pos);
        }
    BipartiteGraph g = BipartiteGraph::make(L, S, gedges);
    flow::MatchingResult match = flow::min_weight_left_perfect_matching(g, weights);
    if (!match.feasible) throw std::logic_error("fractional matching witness violated");

    for (int e = 0; e < g.num_edges(); ++e) {
        if (!match.matching.test(e)) continue;
        const int ci = g.edge(e).left;
        result[{copies[ci].player, part.small[order[edge_pos[e]]]}] = 1;
    }
    return result;
}

std::vector<Rat> threshold_candidates(const SantaInstance& inst, const SolveConfig& config) {
    // Exact subset sums when the distinct-count stays under the cap.
    std::set<Rat> sums{Rat(0)};
    bool exact = true;
    for (const Rat& v : inst.values) {
        std::set<Rat> next = sums;
        for (const Rat& s : sums) {
            next.insert(s + v);
            if (next.size() > config.subset_sum_cap) { exact = false; break; }
        }
        if (!exact) break;
        sums = std::move(next);
    }
    std::vector<Rat> out;
    if (exact) {
        out.assign(sums.begin(), sums.end());
        return out;
    }
    // Geometric grid v_min * (1+eps)^t within [v_min, sum of values].
    out.push_back(Rat(0));
    Rat vmin, vsum;
    for (const Rat& v : inst.values) {
        vsum += v;
        if (v.sign() > 0 && (vmin.is_zero() || v < vmin)) vmin = v;
    }
    if (vmin.is_zero()) return out;
    const Rat growth = Rat(1) + config.eps;
    for (Rat t = vmin; t <= vsum; t *= growth) out.push_back(t);
    return out;
}

namespace {

struct Probe {
    bool ok = false;
    LpSolutionTZ solution;
    ThresholdPartition part;
};

Probe probe_threshold(const SantaInstance& inst, const Rat& threshold, const Rat& alpha) {
    Probe p;
    p.part = partition_resources(inst, threshold, alpha);
    exactlp::LinearProgram lp = build_lp(inst, p.part);
    exactlp::VertexSolution sol = exactlp::solve_vertex(lp);
    if (sol.status != exactlp::SolveStatus::optimal) return p;
    if (sol.objective_value > inst.budget) return p;
    p.ok = true;
    p.solution = extract_lp_solution(inst, p.part, sol);
    return p;
}

}  // namespace

SantaSolution solve(const SantaInstance& inst, const SolveConfig& config, Rng& rng) {
    {
        auto errs = validate_instance(inst);
        if (!errs.empty()) throw std::invalid_argument("invalid santa instance: " + errs[0]);
    }
    const int n = inst.num_resources();
    const Rat beta_target =
        config.c0 * log2_lower(mpz_class(std::max(n, 2))) + Rat(1);
    const Rat alpha = Rat(2) * beta_target;

    std::vector<Rat> candidates = threshold_candidates(inst, config);
    SantaSolution out;
    out.alpha = alpha;
    out.beta_achieved = Rat(1);
    out.allocation.assign(inst.players, {});
    out.threshold_used = Rat(0);

    std::optional<Probe> best;
    long lo = 0, hi = static_cast<long>(candidates.size()) - 1;
    while (lo <= hi) {
        long mid = lo + (hi - lo) / 2;
        Probe p = probe_threshold(inst, candidates[mid], alpha);
        if (p.ok) {
            best = std::move(p);
            out.threshold_used = candidates[mid];
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    if (!best) return out;  // no feasible threshold at all; empty allocation

    treemerge::RoundConfig rconfig;
    rconfig.c0 = config.c0;
    rconfig.max_retries = config.max_retries;
    BigRoundingResult big = round_big(best->solution, inst, best->part, rng, rconfig);
    out.concentration_ok = big.concentration_ok;
    out.beta_achieved = big.beta;

    for (int i = 0; i < inst.players; ++i)
        for (std::size_t bp = 0; bp < best->part.big.size(); ++bp)
            if (big.X[i][bp]) out.allocation[i].push_back(best->part.big[bp]);

    std::vector<int> q_players;
    for (int i = 0; i < inst.players; ++i)
        if (big.Y[i]) q_players.push_back(i);
    if (!q_players.empty() && out.threshold_used.sign() > 0) {
        const bool two_copies = big.concentration_ok;
        auto zint = round_small(big.z_prime, q_players, big.beta, inst, best->part, two_copies);
        for (const auto& [key, on] : zint)
            if (on) out.allocation[key.first].push_back(key.second);
    }
    for (auto& bundle : out.allocation) std::sort(bundle.begin(), bundle.end());

    out.cost = Rat(0);
    bool first = true;
    for (int i = 0; i < inst.players; ++i) {
        Rat v;
        for (int j : out.allocation[i]) {
            v += inst.values[j];
            out.cost += inst.costs[i][j];
        }
        if (first || v < out.value) out.value = v;
        first = false;
    }
    if (out.cost > inst.budget) throw std::logic_error("budget safety violated");
    return out;
}

Reduction reduce_all_assigned(const SantaInstance& inst) {
    Reduction red;
    red.reduced = inst;
    Rat total_min;
    for (int j = 0; j < inst.num_resources(); ++j) {
        Rat best = inst.costs[0][j];
        int who = 0;
        for (int i = 1; i < inst.players; ++i)
            if (inst.costs[i][j] < best) { best = inst.costs[i][j]; who = i; }
        red.column_min.push_back(best);
        red.argmin_player.push_back(who);
        total_min += best;
        for (int i = 0; i < inst.players; ++i) red.reduced.costs[i][j] -= best;
    }
    if (inst.budget < total_min)
        throw AllAssignedInfeasible("all-assigned infeasible: budget below column minima");
    red.reduced.budget = inst.budget - total_min;
    return red;
}

SantaSolution lift_all_assigned(const Reduction& red, const SantaSolution& reduced_solution,
                                const SantaInstance& original) {
    SantaSolution out = reduced_solution;
    std::vector<char> assigned(original.num_resources(), 0);
    for (const auto& bundle : out.allocation)
        for (int j : bundle) assigned[j] = 1;
    for (int j = 0; j < original.num_resources(); ++j)
        if (!assigned[j]) out.allocation[red.argmin_player[j]].push_back(j);
    for (auto& bundle : out.allocation) std::sort(bundle.begin(), bundle.end());

    out.cost = Rat(0);
    bool first = true;
    for (int i = 0; i < original.players; ++i) {
        Rat v;
        for (int j : out.allocation[i]) {
            v += original.values[j];
            out.cost += original.costs[i][j];
        }
        if (first || v < out.value) out.value = v;
        first = false;
    }
    if (out.cost > original.budget)
        throw std::logic_error("lifted solution exceeded the original budget");
    return out;
}

}  // namespace drr::santa
