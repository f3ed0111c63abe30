#pragma once

#include <json.hpp>

#include "holonorm/interp.hpp"
#include "holonorm/norms.hpp"
#include "holonorm/search.hpp"

namespace holonorm {

nlohmann::json to_json(const Domain& domain);
nlohmann::json to_json(const Resolution& resolution);
nlohmann::json to_json(const Witness& witness);
nlohmann::json to_json(const NormReport& report);
nlohmann::json to_json(const InterpSpec& spec);
nlohmann::json to_json(const CheckReport& report);
nlohmann::json to_json(const Family& family);
nlohmann::json to_json(const SearchResult& result);

}  // namespace holonorm
