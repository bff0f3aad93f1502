#include "drr/flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace drr::flow {

int CirculationNetwork::add_arc(int tail, int head, Rat lower, std::optional<Rat> upper,
                                Rat cost) {
    if (tail < 0 || tail >= num_nodes || head < 0 || head >= num_nodes)
        throw std::invalid_argument("arc endpoint out of range");
    if (upper && *upper < lower) throw std::invalid_argument("arc with lower > upper");
    arcs.push_back({tail, head, std::move(lower), std::move(upper), std::move(cost)});
    return static_cast<int>(arcs.size()) - 1;
}

bool Circulation::is_integral() const {
    return std::all_of(flow.begin(), flow.end(), [](const Rat& r) { return r.is_integer(); });
}

bool is_feasible(const CirculationNetwork& net, const Circulation& f) {
    if (f.flow.size() != net.arcs.size()) return false;
    std::vector<Rat> div(net.num_nodes);
    for (std::size_t a = 0; a < net.arcs.size(); ++a) {
        const Arc& arc = net.arcs[a];
        const Rat& v = f.flow[a];
        if (v < arc.lower) return false;
        if (arc.upper && v > *arc.upper) return false;
        div[arc.tail] -= v;
        div[arc.head] += v;
    }
    return std::all_of(div.begin(), div.end(), [](const Rat& r) { return r.is_zero(); });
}

bool CutCertificate::validate(const CirculationNetwork& net) const {
    std::vector<char> in(net.num_nodes, 0);
    for (int v : nodes) {
        if (v < 0 || v >= net.num_nodes) return false;
        in[v] = 1;
    }
    Rat lower_in;   // lower bounds of arcs entering U
    Rat upper_out;  // upper bounds of arcs leaving U
    for (const Arc& a : net.arcs) {
        if (!in[a.tail] && in[a.head]) lower_in += a.lower;
        if (in[a.tail] && !in[a.head]) {
            if (!a.upper) return false;  // infinite escape capacity
            upper_out += *a.upper;
        }
    }
    return lower_in > upper_out;
}

namespace {

struct ResArc {
    int to;
    std::optional<Rat> cap;  // residual capacity, nullopt = infinite
    Rat cost;
    int rev;  // index of the paired arc in radj[to]
    int orig;  // original arc id, -1 for virtual arcs
    bool forward;
};

class SspSolver {
public:
    SspSolver(const CirculationNetwork& net) : net_(net), n_(net.num_nodes + 2) {
        radj_.resize(n_);
    }

    // Returns true and fills `flow` when a feasible circulation exists;
    // otherwise fills `cut` with the residual-reachable node set.
    bool run(std::vector<Rat>& flow, std::vector<int>& cut) {
        const int S = net_.num_nodes, T = net_.num_nodes + 1;
        flow.assign(net_.arcs.size(), Rat(0));
        std::vector<Rat> imbalance(net_.num_nodes);
        for (std::size_t a = 0; a < net_.arcs.size(); ++a) {
            const Arc& arc = net_.arcs[a];
            // Start each arc at its individually cheapest feasible value, so
            // the initial residual network has no negative-cost arcs.
            if (arc.cost.sign() < 0) {
                if (!arc.upper)
                    throw std::invalid_argument(
                        "negative-cost arc with infinite capacity is unsupported");
                flow[a] = *arc.upper;
            } else {
                flow[a] = arc.lower;
            }
            imbalance[arc.head] += flow[a];
            imbalance[arc.tail] -= flow[a];
            add_pair(arc.tail, arc.head,
                     arc.upper ? std::optional<Rat>(*arc.upper - flow[a]) : std::nullopt,
                     flow[a] - arc.lower, arc.cost, static_cast<int>(a));
        }
        Rat supply;
        for (int v = 0; v < net_.num_nodes; ++v) {
            if (imbalance[v].sign() > 0) {
                supply += imbalance[v];
                add_pair(S, v, imbalance[v], Rat(0), Rat(0), -1);
            } else if (imbalance[v].sign() < 0) {
                add_pair(v, T, -imbalance[v], Rat(0), Rat(0), -1);
            }
        }
        int rounds = 0;
        while (supply.sign() > 0) {
            if (++rounds > 200000) throw std::logic_error("circulation solver stalled");
            auto path = shortest_path(S, T);
            if (path.empty()) break;
            Rat delta = supply;
            for (auto [v, idx] : path) {
                const ResArc& ra = radj_[v][idx];
                if (ra.cap && *ra.cap < delta) delta = *ra.cap;
            }
            for (auto [v, idx] : path) {
                ResArc& ra = radj_[v][idx];
                ResArc& back = radj_[ra.to][ra.rev];
                if (ra.cap) *ra.cap -= delta;
                if (back.cap) *back.cap += delta;
                if (ra.orig >= 0) flow[ra.orig] += ra.forward ? delta : -delta;
            }
            supply -= delta;
        }
        if (supply.sign() > 0) {
            cut = reachable_from(S);
            return false;
        }
        return true;
    }

    bool has_negative_cycle() const {
        // Bellman-Ford from an artificial root connected to every node.
        std::vector<Rat> dist(n_, Rat(0));
        for (int round = 0; round < n_; ++round) {
            bool changed = false;
            for (int v = 0; v < n_; ++v)
                for (const ResArc& ra : radj_[v]) {
                    if (ra.cap && ra.cap->is_zero()) continue;
                    if (dist[v] + ra.cost < dist[ra.to]) {
                        dist[ra.to] = dist[v] + ra.cost;
                        changed = true;
                    }
                }
            if (!changed) return false;
        }
        return true;
    }

    // Residual network of an externally given feasible flow.
    static SspSolver residual_of(const CirculationNetwork& net, const Circulation& f) {
        SspSolver s(net);
        for (std::size_t a = 0; a < net.arcs.size(); ++a) {
            const Arc& arc = net.arcs[a];
            s.add_pair(arc.tail, arc.head,
                       arc.upper ? std::optional<Rat>(*arc.upper - f.flow[a]) : std::nullopt,
                       f.flow[a] - arc.lower, arc.cost, static_cast<int>(a));
        }
        return s;
    }

private:
    // Mutually referencing forward/backward residual pair for one arc.
    void add_pair(int from, int to, std::optional<Rat> cap_fwd, std::optional<Rat> cap_bwd,
                  Rat cost, int orig) {
        const int i = static_cast<int>(radj_[from].size());
        const int j = static_cast<int>(radj_[to].size()) + (from == to ? 1 : 0);
        radj_[from].push_back({to, std::move(cap_fwd), cost, j, orig, true});
        radj_[to].push_back({from, std::move(cap_bwd), -cost, i, orig, false});
    }

    // Bellman-Ford shortest path by cost over positive-residual arcs.
    // Returns the path as (node, adjacency index) hops from S to T.
    std::vector<std::pair<int, int>> shortest_path(int S, int T) {
        std::vector<std::optional<Rat>> dist(n_);
        std::vector<std::pair<int, int>> pred(n_, {-1, -1});
        dist[S] = Rat(0);
        for (int round = 0; round < n_; ++round) {
            bool changed = false;
            for (int v = 0; v < n_; ++v) {
                if (!dist[v]) continue;
                for (std::size_t i = 0; i < radj_[v].size(); ++i) {
                    const ResArc& ra = radj_[v][i];
                    if (ra.cap && ra.cap->is_zero()) continue;
                    Rat nd = *dist[v] + ra.cost;
                    if (!dist[ra.to] || nd < *dist[ra.to]) {
                        dist[ra.to] = nd;
                        pred[ra.to] = {v, static_cast<int>(i)};
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        std::vector<std::pair<int, int>> path;
        if (!dist[T]) return path;
        for (int v = T; v != S; v = pred[v].first) path.push_back(pred[v]);
        std::reverse(path.begin(), path.end());
        return path;
    }

    std::vector<int> reachable_from(int S) {
        std::vector<char> seen(n_, 0);
        std::vector<int> stack{S};
        seen[S] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const ResArc& ra : radj_[v]) {
                if (ra.cap && ra.cap->is_zero()) continue;
                if (!seen[ra.to]) {
                    seen[ra.to] = 1;
                    stack.push_back(ra.to);
                }
            }
        }
        std::vector<int> out;
        for (int v = 0; v < net_.num_nodes; ++v)
            if (seen[v]) out.push_back(v);
        return out;
    }

    const CirculationNetwork& net_;
    int n_;
    std::vector<std::vector<ResArc>> radj_;
};

}  // namespace

CirculationResult min_cost_circulation(const CirculationNetwork& net) {
    CirculationResult res;
    SspSolver solver(net);
    std::vector<Rat> flow;
    std::vector<int> cut_nodes;
    if (!solver.run(flow, cut_nodes)) {
        res.feasible = false;
        CutCertificate cert{cut_nodes};
        if (!cert.validate(net)) {
            // The violated set may be the complement of the reachable side.
            std::vector<char> in(net.num_nodes, 0);
            for (int v : cut_nodes) in[v] = 1;
            cert.nodes.clear();
            for (int v = 0; v < net.num_nodes; ++v)
                if (!in[v]) cert.nodes.push_back(v);
        }
        res.cut = std::move(cert);
        return res;
    }
    res.feasible = true;
    res.circulation.flow = std::move(flow);
    res.cost = Rat(0);
    for (std::size_t a = 0; a < net.arcs.size(); ++a)
        res.cost += net.arcs[a].cost * res.circulation.flow[a];
    return res;
}

bool residual_has_negative_cycle(const CirculationNetwork& net, const Circulation& f) {
    return SspSolver::residual_of(net, f).has_negative_cycle();
}

std::vector<std::pair<Rat, Circulation>> decompose_circulation(const CirculationNetwork& net,
                                                               const Circulation& f) {
    for (const Arc& a : net.arcs) {
        if (!a.lower.is_integer() || (a.upper && !a.upper->is_integer()))
            throw std::invalid_argument("decompose_circulation requires integral bounds");
    }
    if (!is_feasible(net, f)) throw std::invalid_argument("infeasible input flow");

    std::vector<std::pair<Rat, Circulation>> terms;
    Rat remaining(1);
    Circulation cur = f;
    const int max_steps = static_cast<int>(net.arcs.size()) + 2;
    for (int step = 0; step < max_steps; ++step) {
        if (cur.is_integral()) {
            terms.emplace_back(remaining, cur);
            return terms;
        }
        // Integral circulation inside the floor/ceil box around cur. It
        // agrees with cur on every integral arc by construction.
        CirculationNetwork box;
        box.num_nodes = net.num_nodes;
        for (std::size_t a = 0; a < net.arcs.size(); ++a) {
            box.add_arc(net.arcs[a].tail, net.arcs[a].head, Rat(cur.flow[a].floor()),
                        Rat(cur.flow[a].ceil()), Rat(0));
        }
        CirculationResult g = min_cost_circulation(box);
        if (!g.feasible) throw std::logic_error("floor/ceil box unexpectedly infeasible");

        // Largest coefficient keeping the remainder within the original
        // bounds: the remainder moves away from g through cur, so only the
        // far-side bound can bind. mu = lambda / (1 - lambda).
        std::optional<Rat> mu;
        for (std::size_t a = 0; a < net.arcs.size(); ++a) {
            const Rat& fv = cur.flow[a];
            const Rat& gv = g.circulation.flow[a];
            if (fv == gv) continue;
            std::optional<Rat> ratio;
            if (fv > gv) {
                if (net.arcs[a].upper) ratio = (*net.arcs[a].upper - fv) / (fv - gv);
            } else {
                ratio = (fv - net.arcs[a].lower) / (gv - fv);
            }
            if (ratio && (!mu || *ratio < *mu)) mu = ratio;
        }
        if (!mu) throw std::logic_error("unbounded decomposition direction");
        Rat lambda = *mu / (Rat(1) + *mu);
        Rat keep = Rat(1) - lambda;
        Circulation rem;
        rem.flow.resize(cur.flow.size());
        for (std::size_t a = 0; a < net.arcs.size(); ++a)
            rem.flow[a] = (cur.flow[a] - lambda * g.circulation.flow[a]) / keep;
        terms.emplace_back(remaining * lambda, g.circulation);
        remaining *= keep;
        cur = std::move(rem);
    }
    throw std::logic_error("decompose_circulation failed to terminate");
}

MatchingResult min_weight_left_perfect_matching(const core::BipartiteGraph& bip,
                                                const std::vector<Rat>& weights) {
    if (static_cast<int>(weights.size()) != bip.num_edges())
        throw std::invalid_argument("weights size mismatch");
    const int L = bip.num_left(), R = bip.num_right();
    CirculationNetwork net;
    const int s = net.add_node();
    std::vector<int> left(L), right(R);
    for (int i = 0; i < L; ++i) left[i] = net.add_node();
    for (int j = 0; j < R; ++j) right[j] = net.add_node();
    const int t = net.add_node();
    for (int i = 0; i < L; ++i) net.add_arc(s, left[i], Rat(1), Rat(1), Rat(0));
    std::vector<int> edge_arc(bip.num_edges());
    for (int e = 0; e < bip.num_edges(); ++e) {
        const auto& ed = bip.edge(e);
        edge_arc[e] = net.add_arc(left[ed.left], right[ed.right - L], Rat(0), Rat(1), weights[e]);
    }
    for (int j = 0; j < R; ++j) net.add_arc(right[j], t, Rat(0), Rat(1), Rat(0));
    net.add_arc(t, s, Rat(L), Rat(L), Rat(0));

    MatchingResult res;
    CirculationResult circ = min_cost_circulation(net);
    if (!circ.feasible) return res;
    res.feasible = true;
    res.matching = core::EdgeSet(bip.num_edges());
    res.weight = Rat(0);
    for (int e = 0; e < bip.num_edges(); ++e) {
        if (circ.circulation.flow[edge_arc[e]] == Rat(1)) {
            res.matching.set(e, true);
            res.weight += weights[e];
        }
    }
    return res;
}

}  // namespace drr::flow
