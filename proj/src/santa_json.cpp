#include "drr/santa_json.hpp"

#include "drr/core_json.hpp"

#include <json.hpp>

namespace drr::santa {

using core::ParseError;
using nlohmann::json;

namespace {

Rat rat_field(const json& j, const std::string& where) {
    try {
        if (j.is_string()) return Rat::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rat(j.get<long long>());
    } catch (const std::exception& ex) {
        throw ParseError(ParseError::Kind::schema, std::string(ex.what()) + " in " + where);
    }
    throw ParseError(ParseError::Kind::schema, "expected rational in " + where);
}

}  // namespace

SantaInstance parse_santa_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ParseError(ParseError::Kind::syntax, ex.what(), ex.byte);
    }
    if (!j.is_object()) throw ParseError(ParseError::Kind::schema, "instance must be an object");
    SantaInstance inst;
    if (!j.contains("players") || !j["players"].is_number_integer())
        throw ParseError(ParseError::Kind::schema, "missing integer field 'players'");
    inst.players = j["players"].get<int>();
    if (!j.contains("resources") || !j["resources"].is_array())
        throw ParseError(ParseError::Kind::schema, "missing array field 'resources'");
    int rid = 0;
    for (const auto& r : j["resources"]) {
        if (!r.is_object() || !r.contains("value"))
            throw ParseError(ParseError::Kind::schema,
                             "resource " + std::to_string(rid) + " needs a 'value'");
        inst.values.push_back(rat_field(r["value"], "resource " + std::to_string(rid)));
        ++rid;
    }
    if (!j.contains("costs") || !j["costs"].is_array())
        throw ParseError(ParseError::Kind::schema, "missing array field 'costs'");
    int row = 0;
    for (const auto& jr : j["costs"]) {
        if (!jr.is_array())
            throw ParseError(ParseError::Kind::schema, "costs rows must be arrays");
        std::vector<Rat> costs_row;
        int col = 0;
        for (const auto& jc : jr) {
            costs_row.push_back(
                rat_field(jc, "cost[" + std::to_string(row) + "][" + std::to_string(col) + "]"));
            ++col;
        }
        inst.costs.push_back(std::move(costs_row));
        ++row;
    }
    if (!j.contains("budget"))
        throw ParseError(ParseError::Kind::schema, "missing field 'budget'");
    inst.budget = rat_field(j["budget"], "budget");
    return inst;
}

std::string serialize_santa_instance(const SantaInstance& inst) {
    json j;
    j["players"] = inst.players;
    j["resources"] = json::array();
    for (const Rat& v : inst.values) j["resources"].push_back({{"value", v.str()}});
    j["costs"] = json::array();
    for (const auto& row : inst.costs) {
        json jr = json::array();
        for (const Rat& c : row) jr.push_back(c.str());
        j["costs"].push_back(std::move(jr));
    }
    j["budget"] = inst.budget.str();
    return j.dump(2);
}

std::string serialize_santa_solution(const SantaSolution& sol) {
    json j;
    j["value"] = sol.value.str();
    j["cost"] = sol.cost.str();
    j["threshold"] = sol.threshold_used.str();
    j["alpha"] = sol.alpha.str();
    j["beta_achieved"] = sol.beta_achieved.str();
    j["concentration_ok"] = sol.concentration_ok;
    json alloc = json::object();
    for (std::size_t i = 0; i < sol.allocation.size(); ++i)
        alloc[std::to_string(i)] = sol.allocation[i];
    j["allocation"] = std::move(alloc);
    return j.dump(2);
}

}  // namespace drr::santa
