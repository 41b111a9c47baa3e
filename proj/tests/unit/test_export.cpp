#include <doctest.h>

#include <json.hpp>

#include "hofbauer/export.hpp"

using namespace hofbauer;

TEST_CASE("tower JSON carries domains, edges and the frontier") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 2)}}, 5);
    const auto j = nlohmann::json::parse(tower_to_json(g, R"({"R":5})", "abc"));
    CHECK(j["config"]["R"] == 5);
    CHECK(j["config_hash"] == "abc");
    REQUIRE(j["domains"].size() == 6);
    CHECK(j["domains"][0]["arcs"][0][0] == "0/1");
    CHECK(j["domains"][0]["arcs"][0][1] == "1/1");
    CHECK(j["domains"][3]["level"] == 3);
    CHECK(j["domains"][3]["cutpoints"][1]["age"] == 3);
    CHECK(j["domains"][3]["cutpoints"][1]["angles"][0] == "0/1");
    CHECK(j["edges"].size() == g.edges().size());
    CHECK(j["frontier"] == nlohmann::json::array({5}));
}

TEST_CASE("exported arcs reproduce the arc lengths") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(5, 12), Angle(7, 12)}}, 4);
    const auto j = nlohmann::json::parse(tower_to_json(g, "{}", "h"));
    REQUIRE(j["domains"].size() == g.domains().size());
    for (std::size_t i = 0; i < g.domains().size(); ++i) {
        mpq_class total = 0;
        for (const auto& a : j["domains"][i]["arcs"]) {
            const mpq_class s(a[0].get<std::string>()), e(a[1].get<std::string>());
            total += e > s ? mpq_class(e - s) : mpq_class(e - s + 1); // a wrapping arc ends before it starts
        }
        CHECK(total == g.domains()[i].arcset.total_length());
    }
}

TEST_CASE("DOT export ranks domains by level") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 2)}}, 3);
    const std::string dot = tower_to_dot(g, "h");
    CHECK(dot.find("digraph tower") != std::string::npos);
    CHECK(dot.find("{ rank=same; d3; }") != std::string::npos);
    CHECK(dot.find("d2 -> d3 [label=\"1\"]") != std::string::npos);
    CHECK(dot.find("frontier") != std::string::npos);
}
