#include <doctest.h>

#include <random>

#include "hofbauer/symbolic.hpp"

using namespace hofbauer;

TEST_CASE("partition for the 1/2 ray") {
    const PartitionP1 p(RayChoice{2, {Angle(1, 2)}});
    REQUIRE(p.size() == 2);
    CHECK(p.boundary()[0] == Angle(1, 4));
    CHECK(p.boundary()[1] == Angle(3, 4));
    CHECK(p.symbol(Angle(1, 2)) == 0);
    CHECK(p.symbol(Angle(1, 4)) == 0);
    CHECK(p.symbol(Angle(0, 1)) == 1);
    CHECK(p.symbol(Angle(3, 4)) == 1);
    CHECK(p.arc(0).key() == "[1/4,3/4)");
    CHECK(p.arc(1).key() == "[3/4,1/4)");
    CHECK(itinerary(Angle(1, 2), p, 4) == Word{0, 1, 1, 1});
    CHECK(word_string({0, 1, 1}) == "0,1,1");
}

TEST_CASE("two rays give four arcs") {
    const PartitionP1 p(RayChoice{2, {Angle(5, 12), Angle(7, 12)}});
    REQUIRE(p.size() == 4);
    mpq_class total = 0;
    for (Symbol s = 0; s < 4; ++s) total += p.arc(s).total_length();
    CHECK(total == 1);
}

TEST_CASE("ray choices are validated") {
    CHECK_THROWS_AS(PartitionP1(RayChoice{2, {Angle(1, 3)}}), std::invalid_argument);
    CHECK_THROWS_AS(PartitionP1(RayChoice{2, {}}), std::invalid_argument);
    CHECK_THROWS_AS(PartitionP1(RayChoice{2, {Angle(1, 2), Angle(1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(PartitionP1(RayChoice{2, {Angle(1, 6), Angle(1, 2), Angle(5, 12)}}), std::invalid_argument);
}

TEST_CASE("cursor symbols agree with exact symbols near boundaries") {
    const PartitionP1 p(RayChoice{2, {Angle(1, 6)}});
    for (const Angle& b : p.boundary()) {
        for (long k : {-1L, 0L, 1L}) {
            const Angle x = b.shifted(mpq_class(k, 1L << 40));
            CHECK(p.symbol(AngleCursor(x, 2)) == p.symbol(x));
        }
    }
}

TEST_CASE("property: cylinders hold exactly the angles with the given itinerary") {
    std::mt19937_64 rng(3);
    for (const RayChoice& rc : {RayChoice{2, {Angle(1, 2)}}, RayChoice{2, {Angle(1, 6)}},
                                RayChoice{2, {Angle(5, 12), Angle(7, 12)}}, RayChoice{3, {Angle(1, 9)}}}) {
        const PartitionP1 p(rc);
        for (std::size_t m = 1; m <= 5; ++m) {
            const auto words = admissible_words(p, m);
            mpq_class total = 0;
            for (const Word& w : words) {
                const ArcSet c = cylinder_arcset(w, p);
                CHECK_FALSE(c.empty());
                total += c.total_length();
            }
            CHECK(total == 1); // the cylinders of one depth tile the circle
            for (int k = 0; k < 40; ++k) {
                const Angle x(static_cast<long>(rng() % 99991), 99991);
                const Word w = itinerary(x, p, m);
                CHECK(cylinder_arcset(w, p).contains(x));
                CHECK(std::binary_search(words.begin(), words.end(), w));
            }
        }
    }
}

TEST_CASE("all words are admissible when every arc covers the circle") {
    const PartitionP1 p(RayChoice{2, {Angle(1, 2)}});
    CHECK(admissible_words(p, 6).size() == 64);
    const PartitionP1 q(RayChoice{2, {Angle(5, 12), Angle(7, 12)}});
    CHECK(admissible_words(q, 3).size() < 64);
}

TEST_CASE("boundary hits") {
    const PartitionP1 p(RayChoice{2, {Angle(1, 2)}});
    CHECK(hits_boundary(Angle(1, 4), p, 1));
    CHECK(hits_boundary(Angle(1, 8), p, 2));
    CHECK_FALSE(hits_boundary(Angle(1, 8), p, 1));
    CHECK_FALSE(hits_boundary(Angle(1, 3), p, 100));
}
