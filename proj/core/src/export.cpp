#include "hofbauer/export.hpp"

#include <map>
#include <sstream>

#include <json.hpp>

namespace hofbauer {
namespace {

std::string q_string(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// End point of an arc; a wrapping arc has end < start, the full circle ends at 1/1.
std::string arc_end(const Arc& a) {
    if (a.length >= 1) return "1/1";
    return q_string(frac(a.start.value() + a.length));
}

} // namespace

std::string tower_to_json(const TowerGraph& g, const std::string& config_json,
                          const std::string& config_hash) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["config"] = ordered_json::parse(config_json);
    j["config_hash"] = config_hash;
    ordered_json domains = ordered_json::array();
    for (const Domain& d : g.domains()) {
        ordered_json arcs = ordered_json::array();
        for (const Arc& a : d.arcset.components()) arcs.push_back({q_string(a.start.value()), arc_end(a)});
        ordered_json cps = ordered_json::array();
        for (const CutPoint& c : d.cutpoints) {
            ordered_json angles = ordered_json::array();
            for (const Angle& a : c.angles) angles.push_back(q_string(a.value()));
            cps.push_back({{"age", c.age}, {"origin", c.origin}, {"angles", angles}});
        }
        domains.push_back({{"id", d.id}, {"level", d.level}, {"arcs", arcs}, {"cutpoints", cps}});
    }
    j["domains"] = domains;
    ordered_json edges = ordered_json::array();
    for (const Edge& e : g.edges()) edges.push_back({{"from", e.from}, {"symbol", e.symbol}, {"to", e.to}});
    j["edges"] = edges;
    j["frontier"] = g.frontier_ids();
    return j.dump(2) + "\n";
}

std::string tower_to_dot(const TowerGraph& g, const std::string& config_hash) {
    std::ostringstream os;
    os << "// config_hash " << config_hash << "\n";
    os << "digraph tower {\n  rankdir=TB;\n  node [shape=box];\n";
    std::map<int, std::vector<int>> ranks;
    for (const Domain& d : g.domains()) ranks[d.level].push_back(d.id);
    for (const auto& [level, ids] : ranks) {
        os << "  { rank=same;";
        for (int id : ids) os << " d" << id << ";";
        os << " }\n";
    }
    for (const Domain& d : g.domains())
        os << "  d" << d.id << " [label=\"D" << d.id << "\\nlevel " << d.level << "\"];\n";
    for (const Edge& e : g.edges())
        os << "  d" << e.from << " -> d" << e.to << " [label=\"" << e.symbol << "\"];\n";
    if (!g.frontier_edges().empty()) {
        os << "  frontier [shape=plaintext, label=\"above R\"];\n";
        for (const FrontierEdge& f : g.frontier_edges())
            os << "  d" << f.from << " -> frontier [style=dashed, label=\"" << f.symbol << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace hofbauer
