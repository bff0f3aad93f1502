#include "drr/core_json.hpp"

#include <json.hpp>

#include <set>

namespace drr::core {

using nlohmann::json;

namespace {

Rat rat_from_json(const json& j, const std::string& where) {
    try {
        if (j.is_string()) return Rat::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rat(j.get<long long>());
    } catch (const std::exception& ex) {
        throw ParseError(ParseError::Kind::schema, std::string(ex.what()) + " in " + where);
    }
    throw ParseError(ParseError::Kind::schema, "expected rational string in " + where);
}

const json& field(const json& j, const char* name, const std::string& where) {
    auto it = j.find(name);
    if (it == j.end())
        throw ParseError(ParseError::Kind::schema,
                         "missing field '" + std::string(name) + "' in " + where);
    return *it;
}

std::vector<std::string> name_list(const json& j, const std::string& where) {
    if (!j.is_array())
        throw ParseError(ParseError::Kind::schema, where + " must be an array");
    std::vector<std::string> out;
    for (const auto& el : j) {
        if (!el.is_string())
            throw ParseError(ParseError::Kind::schema, where + " entries must be strings");
        out.push_back(el.get<std::string>());
    }
    return out;
}

}  // namespace

RoundingInstance parse_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ParseError(ParseError::Kind::syntax, ex.what(), ex.byte);
    }
    if (!j.is_object())
        throw ParseError(ParseError::Kind::schema, "instance must be a JSON object");

    auto left = name_list(field(j, "left", "instance"), "left");
    auto right = name_list(field(j, "right", "instance"), "right");

    std::set<std::string> seen;
    for (const auto& lists : {left, right})
        for (const auto& n : lists)
            if (!seen.insert(n).second)
                throw ParseError(ParseError::Kind::schema, "duplicate vertex name '" + n + "'");

    auto index_of = [&](const std::string& name, bool want_left,
                        const std::string& where) -> int {
        const auto& names = want_left ? left : right;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name)
                return static_cast<int>(i) + (want_left ? 0 : static_cast<int>(left.size()));
        throw ParseError(ParseError::Kind::schema,
                         "unknown " + std::string(want_left ? "left" : "right") + " vertex '" +
                             name + "' in " + where);
    };

    const json& jedges = field(j, "edges", "instance");
    if (!jedges.is_array())
        throw ParseError(ParseError::Kind::schema, "edges must be an array");

    std::vector<BipartiteGraph::Edge> edges;
    std::vector<Rat> x, c;
    int eid = 0;
    for (const auto& je : jedges) {
        std::string where = "edge " + std::to_string(eid);
        const json& ju = field(je, "u", where);
        const json& jv = field(je, "v", where);
        if (!ju.is_string() || !jv.is_string())
            throw ParseError(ParseError::Kind::schema, "u/v must be vertex names in " + where);
        edges.push_back({index_of(ju.get<std::string>(), true, where),
                         index_of(jv.get<std::string>(), false, where)});
        x.push_back(rat_from_json(field(je, "x", where), where + " x"));
        c.push_back(rat_from_json(field(je, "c", where), where + " c"));
        ++eid;
    }

    RoundingInstance inst;
    inst.graph = BipartiteGraph(std::move(left), std::move(right), std::move(edges));
    inst.x = std::move(x);
    inst.c = std::move(c);

    if (auto it = j.find("funcs"); it != j.end()) {
        if (!it->is_array())
            throw ParseError(ParseError::Kind::schema, "funcs must be an array");
        int fid = 0;
        for (const auto& jf : *it) {
            std::string where = "func " + std::to_string(fid);
            LinearFunction f;
            const json& jvert = field(jf, "vertex", where);
            if (!jvert.is_string())
                throw ParseError(ParseError::Kind::schema, "vertex must be a name in " + where);
            f.anchor_vertex = inst.graph.find_vertex(jvert.get<std::string>());
            if (f.anchor_vertex < 0)
                throw ParseError(ParseError::Kind::schema,
                                 "unknown vertex '" + jvert.get<std::string>() + "' in " + where);
            const json& jc = field(jf, "coeffs", where);
            if (!jc.is_object())
                throw ParseError(ParseError::Kind::schema, "coeffs must be an object in " + where);
            for (auto it2 = jc.begin(); it2 != jc.end(); ++it2) {
                int e;
                try {
                    std::size_t pos = 0;
                    e = std::stoi(it2.key(), &pos);
                    if (pos != it2.key().size()) throw std::invalid_argument("trailing chars");
                } catch (const std::exception&) {
                    throw ParseError(ParseError::Kind::schema,
                                     "coeff key '" + it2.key() + "' is not an edge index in " + where);
                }
                if (e < 0 || e >= inst.graph.num_edges())
                    throw ParseError(ParseError::Kind::schema,
                                     "coeff edge index " + it2.key() + " out of range in " + where);
                f.coeffs[e] = rat_from_json(it2.value(), where + " coeff " + it2.key());
            }
            inst.funcs.push_back(std::move(f));
            ++fid;
        }
    }
    return inst;
}

std::string serialize_instance(const RoundingInstance& inst) {
    json j;
    j["left"] = inst.graph.left_names();
    j["right"] = inst.graph.right_names();
    j["edges"] = json::array();
    for (int e = 0; e < inst.graph.num_edges(); ++e) {
        const auto& ed = inst.graph.edge(e);
        j["edges"].push_back({{"u", inst.graph.vertex_name(ed.left)},
                              {"v", inst.graph.vertex_name(ed.right)},
                              {"x", inst.x[e].str()},
                              {"c", inst.c[e].str()}});
    }
    j["funcs"] = json::array();
    for (const auto& f : inst.funcs) {
        json jc = json::object();
        for (const auto& [e, a] : f.coeffs) jc[std::to_string(e)] = a.str();
        j["funcs"].push_back(
            {{"vertex", inst.graph.vertex_name(f.anchor_vertex)}, {"coeffs", jc}});
    }
    return j.dump(2);
}

bool operator==(const BipartiteGraph::Edge& a, const BipartiteGraph::Edge& b) {
    return a.left == b.left && a.right == b.right;
}

bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.left_names() == b.left_names() && a.right_names() == b.right_names() &&
           a.edges() == b.edges();
}

bool operator==(const LinearFunction& a, const LinearFunction& b) {
    return a.anchor_vertex == b.anchor_vertex && a.coeffs == b.coeffs;
}

bool operator==(const RoundingInstance& a, const RoundingInstance& b) {
    return a.graph == b.graph && a.x == b.x && a.c == b.c && a.funcs == b.funcs;
}

}  // namespace drr::core
