#pragma once

#include "drr/core.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drr::core {

// Positioned input error. `byte_offset` is meaningful for syntax errors
// (tokenizer position); schema errors carry 0 unless a position is known.
struct ParseError : std::runtime_error {
    enum class Kind { syntax, schema };
    Kind kind;
    std::size_t byte_offset;

    ParseError(Kind k, const std::string& msg, std::size_t off = 0)
        : std::runtime_error(msg), kind(k), byte_offset(off) {}
};

// Instance file schema:
//   {"left": [names], "right": [names],
//    "edges": [{"u": name, "v": name, "x": "p/q", "c": "p/q"}],
//    "funcs": [{"vertex": name, "coeffs": {"<edge index>": "p/q"}}]}
// Rationals are strings "p/q" or integer strings. Edge order in the file
// defines the edge ids.
RoundingInstance parse_instance(const std::string& json_text);
std::string serialize_instance(const RoundingInstance& inst);

bool operator==(const BipartiteGraph& a, const BipartiteGraph& b);
bool operator==(const BipartiteGraph::Edge& a, const BipartiteGraph::Edge& b);
bool operator==(const LinearFunction& a, const LinearFunction& b);
bool operator==(const RoundingInstance& a, const RoundingInstance& b);

}  // namespace drr::core
