#pragma once

#include "drr/santa.hpp"

#include <string>

namespace drr::santa {

// Instance file: {"players": m, "resources": [{"value": "p/q"}],
//                 "costs": [[...]], "budget": "p/q"}.
SantaInstance parse_santa_instance(const std::string& json_text);
std::string serialize_santa_instance(const SantaInstance& inst);

// CLI-facing result object.
std::string serialize_santa_solution(const SantaSolution& sol);

}  // namespace drr::santa
