#pragma once

#include <string>

#include "hofbauer/tower.hpp"

namespace hofbauer {

/// Tower as JSON text: {config, config_hash, domains, edges, frontier}.
/// `config_json` must itself be a JSON document (it is embedded as-is).
std::string tower_to_json(const TowerGraph& g, const std::string& config_json,
                          const std::string& config_hash);

/// Graphviz text of the Markov graph, one rank per level. Frontier
/// markers become a single dashed sink.
std::string tower_to_dot(const TowerGraph& g, const std::string& config_hash);

} // namespace hofbauer
