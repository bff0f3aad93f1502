#include "drr/decompose.hpp"

#include "drr/exactlp.hpp"

#include <algorithm>
#include <stdexcept>

namespace drr::decompose {

using core::BipartiteGraph;
using core::ConvexCombination;
using core::DegreeBounds;
using core::EdgeSet;
using core::RoundingInstance;

ReducedSolution solve_reduced(const RoundingInstance& inst) {
    ReducedSolution out;
    out.bounds = core::degree_bounds(inst);
    const int E = inst.graph.num_edges();

    if (inst.x_integral()) {
        // x itself is a degree-preserving set and matches every function
        // value trivially.
        out.y = inst.x;
        EdgeSet s(E);
        for (int e = 0; e < E; ++e)
            if (inst.x[e] == Rat(1)) s.set(e, true);
        out.combination.terms.push_back({Rat(1), std::move(s)});
        return out;
    }

    exactlp::LinearProgram lp;
    for (int e = 0; e < E; ++e) lp.add_variable(Rat(0), Rat(1));
    for (int v = 0; v < inst.graph.num_vertices(); ++v) {
        if (inst.graph.star(v).empty()) continue;
        std::map<int, Rat> row;
        for (int e : inst.graph.star(v)) row[e] += Rat(1);
        lp.add_range(std::move(row), Rat(out.bounds.lo[v]), Rat(out.bounds.hi[v]));
    }
    for (const auto& f : inst.funcs) {
        std::map<int, Rat> row;
        for (const auto& [e, a] : f.coeffs)
            if (!a.is_zero()) row[e] = a;
        lp.add_constraint(std::move(row), exactlp::Relation::eq, f.value_of(inst.x));
    }
    std::map<int, Rat> obj;
    for (int e = 0; e < E; ++e)
        if (!inst.c[e].is_zero()) obj[e] = inst.c[e];
    lp.set_objective(std::move(obj), exactlp::Sense::minimize);

    exactlp::VertexSolution sol = exactlp::solve_vertex(lp);
    if (sol.status != exactlp::SolveStatus::optimal)
        throw std::logic_error("reduced LP must be solvable: x is a feasible witness");
    out.y = std::move(sol.values);

    if (core::dot(inst.c, out.y) > core::dot(inst.c, inst.x))
        throw std::logic_error("reduced LP returned a costlier point than x");
    const std::size_t two_k = 2 * inst.funcs.size();
    for (int v = 0; v < inst.graph.num_vertices(); ++v) {
        std::size_t frac = 0;
        for (int e : inst.graph.star(v))
            if (!out.y[e].is_integer()) ++frac;
        if (frac > two_k)
            throw std::logic_error("vertex solution exceeds the fractional support bound");
    }

    out.combination = decompose_into_sets(inst.graph, out.y, out.bounds);
    return out;
}

ConvexCombination decompose_into_sets(const BipartiteGraph& graph, const std::vector<Rat>& y,
                                      const DegreeBounds& bounds) {
    const int E = graph.num_edges();
    const int L = graph.num_left();
    flow::CirculationNetwork net;
    const int s = net.add_node();
    const int t = net.add_node();
    std::vector<int> vnode(graph.num_vertices());
    for (int v = 0; v < graph.num_vertices(); ++v) vnode[v] = net.add_node();

    // Edge arcs come first so arc id == edge id.
    for (int e = 0; e < E; ++e)
        net.add_arc(vnode[graph.edge(e).left], vnode[graph.edge(e).right], Rat(0), Rat(1),
                    Rat(0));
    for (int v = 0; v < graph.num_vertices(); ++v) {
        if (graph.star(v).empty()) continue;
        if (graph.is_left(v))
            net.add_arc(s, vnode[v], Rat(bounds.lo[v]), Rat(bounds.hi[v]), Rat(0));
        else
            net.add_arc(vnode[v], t, Rat(bounds.lo[v]), Rat(bounds.hi[v]), Rat(0));
    }
    net.add_arc(t, s, Rat(0), std::nullopt, Rat(0));

    flow::Circulation f;
    f.flow.resize(net.arcs.size());
    Rat total;
    for (int e = 0; e < E; ++e) {
        f.flow[e] = y[e];
        total += y[e];
    }
    int arc = E;
    for (int v = 0; v < graph.num_vertices(); ++v) {
        if (graph.star(v).empty()) continue;
        Rat deg;
        for (int e : graph.star(v)) deg += y[e];
        f.flow[arc++] = deg;
    }
    f.flow[arc] = total;

    if (!flow::is_feasible(net, f)) throw std::invalid_argument("not in polytope");

    ConvexCombination comb;
    for (auto& [coef, circ] : flow::decompose_circulation(net, f)) {
        EdgeSet set(E);
        for (int e = 0; e < E; ++e)
            if (circ.flow[e] == Rat(1)) set.set(e, true);
        if (!bounds.admits(graph, set))
            throw std::logic_error("decomposition produced a non-degree-preserving set");
        comb.terms.push_back({coef, std::move(set)});
    }
    return comb;
}

long choose_level(std::size_t num_terms, std::size_t num_funcs) {
    if (num_terms < 1) throw std::invalid_argument("empty combination");
    const std::size_t m = std::max({num_terms, num_funcs, std::size_t(2)});
    mpz_class target = mpz_class(static_cast<unsigned long>(2 * m));
    target *= target;  // (2m)^2
    // Smallest l with 2^l >= target.
    std::size_t bits = mpz_sizeinbase(target.get_mpz_t(), 2);
    mpz_class pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 2, bits - 1);
    return static_cast<long>(pow == target ? bits - 1 : bits);
}

DyadicCombination round_scalars(const ConvexCombination& comb, const std::vector<Rat>& costs,
                                long level) {
    const std::size_t K = comb.terms.size();
    if (K == 0) throw std::invalid_argument("empty combination");
    const Rat scale = pow2(level);

    flow::CirculationNetwork net;
    const int s = net.add_node();
    const int t = net.add_node();
    std::vector<int> source_arc(K);
    for (std::size_t i = 0; i < K; ++i) {
        const int vi = net.add_node();
        Rat scaled = comb.terms[i].lambda * scale;
        Rat lo(scaled.floor()), hi(scaled.ceil());
        source_arc[i] = net.add_arc(s, vi, lo, hi, core::dot(costs, comb.terms[i].set));
        net.add_arc(vi, t, lo, hi, Rat(0));
    }
    net.add_arc(t, s, scale, scale, Rat(0));

    flow::CirculationResult res = flow::min_cost_circulation(net);
    if (!res.feasible)
        throw std::logic_error("scalar rounding network is feasible by construction");

    DyadicCombination out;
    out.level = level;
    out.y_prime.assign(costs.size(), Rat(0));
    for (std::size_t i = 0; i < K; ++i) {
        Rat lambda = res.circulation.flow[source_arc[i]] / scale;
        for (int e = 0; e < comb.terms[i].set.size(); ++e)
            if (comb.terms[i].set.test(e)) out.y_prime[e] += lambda;
        out.terms.push_back({std::move(lambda), comb.terms[i].set});
    }
    return out;
}

}  // namespace drr::decompose
