#pragma once

#include <string>

#include <json.hpp>

#include "rv/arena.hpp"
#include "rv/mealy.hpp"

namespace rv {

using json = nlohmann::json;

Game game_from_json(const json& j);
json game_to_json(const Game& g);
MealyMachine machine_from_json(const Game& g, const json& j);
json machine_to_json(const Game& g, const MealyMachine& m);
json lasso_to_json(const Game& g, const Lasso& l);
Lasso lasso_from_json(const Game& g, const json& j);

json read_json_file(const std::string& path);

}  // namespace rv
