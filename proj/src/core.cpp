#include "drr/core.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace drr::core {

BipartiteGraph::BipartiteGraph(std::vector<std::string> left_names,
                               std::vector<std::string> right_names,
                               std::vector<Edge> edges)
    : left_names_(std::move(left_names)),
      right_names_(std::move(right_names)),
      edges_(std::move(edges)) {
    stars_.resize(num_vertices());
    for (int e = 0; e < num_edges(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.left < 0 || ed.left >= num_left() || ed.right < num_left() ||
            ed.right >= num_vertices())
            throw std::invalid_argument("edge does not join side A to side B");
        stars_[ed.left].push_back(e);
        stars_[ed.right].push_back(e);
    }
}

BipartiteGraph BipartiteGraph::make(int num_left, int num_right,
                                    const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::string> ln(num_left), rn(num_right);
    for (int i = 0; i < num_left; ++i) ln[i] = "a" + std::to_string(i);
    for (int i = 0; i < num_right; ++i) rn[i] = "b" + std::to_string(i);
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (auto [u, v] : edges) es.push_back({u, num_left + v});
    return BipartiteGraph(std::move(ln), std::move(rn), std::move(es));
}

const std::string& BipartiteGraph::vertex_name(int v) const {
    return is_left(v) ? left_names_[v] : right_names_[v - num_left()];
}

int BipartiteGraph::find_vertex(const std::string& name) const {
    for (int v = 0; v < num_vertices(); ++v)
        if (vertex_name(v) == name) return v;
    return -1;
}

int EdgeSet::count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
}

int EdgeSet::count_in(const std::vector<int>& edge_ids) const {
    int c = 0;
    for (int e : edge_ids) c += test(e) ? 1 : 0;
    return c;
}

std::vector<int> EdgeSet::members() const {
    std::vector<int> out;
    for (int e = 0; e < n_; ++e)
        if (test(e)) out.push_back(e);
    return out;
}

EdgeSet EdgeSet::sym_diff(const EdgeSet& o) const {
    if (n_ != o.n_) throw std::invalid_argument("edge sets over different graphs");
    EdgeSet r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] ^ o.words_[i];
    return r;
}

std::strong_ordering EdgeSet::operator<=>(const EdgeSet& o) const {
    if (auto c = n_ <=> o.n_; c != 0) return c;
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (auto c = words_[i] <=> o.words_[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

std::string EdgeSet::bits_string() const {
    std::string s(n_, '0');
    for (int e = 0; e < n_; ++e)
        if (test(e)) s[e] = '1';
    return s;
}

Rat LinearFunction::value_of(const std::vector<Rat>& x) const {
    Rat v;
    for (const auto& [e, a] : coeffs) v += a * x[e];
    return v;
}

Rat LinearFunction::value_of(const EdgeSet& s) const {
    Rat v;
    for (const auto& [e, a] : coeffs)
        if (s.test(e)) v += a;
    return v;
}

Rat RoundingInstance::cost_of(const std::vector<Rat>& point) const { return dot(c, point); }
Rat RoundingInstance::cost_of(const EdgeSet& s) const { return dot(c, s); }

bool RoundingInstance::x_integral() const {
    return std::all_of(x.begin(), x.end(), [](const Rat& v) { return v.is_integer(); });
}

bool DegreeBounds::admits(const BipartiteGraph& g, const EdgeSet& s) const {
    for (int v = 0; v < g.num_vertices(); ++v) {
        mpz_class d(s.count_in(g.star(v)));
        if (d < lo[v] || d > hi[v]) return false;
    }
    return true;
}

std::vector<Rat> ConvexCombination::value(int num_edges) const {
    std::vector<Rat> y(num_edges);
    for (const auto& t : terms)
        for (int e = 0; e < num_edges; ++e)
            if (t.set.test(e)) y[e] += t.lambda;
    return y;
}

Rat ConvexCombination::lambda_sum() const {
    Rat s;
    for (const auto& t : terms) s += t.lambda;
    return s;
}

ValidationReport validate_instance(const RoundingInstance& inst) {
    ValidationReport rep;
    const int E = inst.graph.num_edges();
    if (static_cast<int>(inst.x.size()) != E || static_cast<int>(inst.c.size()) != E) {
        rep.violations.push_back("x/c size does not match edge count");
        return rep;
    }
    const Rat zero(0), one(1);
    for (int e = 0; e < E; ++e)
        if (inst.x[e] < zero || inst.x[e] > one)
            rep.violations.push_back("x out of range at " + std::to_string(e));
    for (std::size_t j = 0; j < inst.funcs.size(); ++j) {
        const LinearFunction& f = inst.funcs[j];
        const std::string label = "function " + std::to_string(j + 1);
        if (f.anchor_vertex < 0 || f.anchor_vertex >= inst.graph.num_vertices()) {
            rep.violations.push_back(label + " has invalid anchor vertex");
            continue;
        }
        bool star_ok = true;
        for (const auto& [e, a] : f.coeffs) {
            if (e < 0 || e >= E) {
                rep.violations.push_back(label + " references unknown edge " + std::to_string(e));
                star_ok = false;
                continue;
            }
            if (a < zero || a > one)
                rep.violations.push_back(label + " coefficient out of range at " + std::to_string(e));
            if (!a.is_zero()) {
                const auto& ed = inst.graph.edge(e);
                if (ed.left != f.anchor_vertex && ed.right != f.anchor_vertex) star_ok = false;
            }
        }
        if (!star_ok) rep.violations.push_back(label + " not star-supported");
    }
    return rep;
}

DegreeBounds degree_bounds(const RoundingInstance& inst) {
    const int V = inst.graph.num_vertices();
    DegreeBounds b;
    b.lo.resize(V);
    b.hi.resize(V);
    for (int v = 0; v < V; ++v) {
        Rat deg;
        for (int e : inst.graph.star(v)) deg += inst.x[e];
        b.lo[v] = deg.floor();
        b.hi[v] = deg.ceil();
    }
    return b;
}

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rat s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    return s;
}

Rat dot(const std::vector<Rat>& a, const EdgeSet& s) {
    if (static_cast<int>(a.size()) != s.size())
        throw std::invalid_argument("dot: size mismatch");
    Rat r;
    for (int e = 0; e < s.size(); ++e)
        if (s.test(e)) r += a[e];
    return r;
}

}  // namespace drr::core
