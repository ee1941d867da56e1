#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "swarmlab/csv.hpp"
#include "swarmlab/graph.hpp"
#include "swarmlab/rng.hpp"

using namespace swarmlab;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("rng streams are deterministic per seed", "[core]") {
    Rng a(12345), b(12345), c(54321);
    bool diverged = false;
    for (int i = 0; i < 64; ++i) {
        double va = a.uniform01();
        CHECK(va == b.uniform01());
        CHECK(va >= 0.0);
        CHECK(va < 1.0);
        if (va != c.uniform01()) diverged = true;
    }
    CHECK(diverged);
    CHECK(std::string(Rng::name()) == "mt19937_64");
}

TEST_CASE("rng uniform ranges", "[core]") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        double v = rng.uniform(2.0, 5.0);
        CHECK(v >= 2.0);
        CHECK(v < 5.0);
        double s = rng.symmetric(0.5);
        CHECK(s >= -0.5);
        CHECK(s < 0.5);
    }
}

TEST_CASE("double formatting is round-trip exact and locale-free", "[core]") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-3.0) == "-3");
    CHECK(format_double(0.0009765625) == "0.0009765625");

    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
        double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-6.0, 6.0));
        std::string s = format_double(v);
        CHECK(s.find(',') == std::string::npos);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("csv_row joins mixed fields", "[core]") {
    std::ostringstream os;
    csv_row(os, 3, std::string("A-B"), 0.5, true);
    CHECK(os.str() == "3,A-B,0.5,1\n");
}

TEST_CASE("graph construction and lookups", "[graph]") {
    Graph g;
    g.add_edge("A", "B", 1.0);
    g.add_edge("B", "C", 2.0);
    g.add_edge("A", "C", 5.0);

    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.node_id(g.require_node("B")) == "B");
    CHECK(!g.find_node("missing").has_value());

    auto e = g.find_edge(g.require_node("A"), g.require_node("C"));
    REQUIRE(e.has_value());
    CHECK(g.edge(*e).cost == 5.0);
    CHECK(g.eta(*e) == 0.2);
    CHECK(!g.find_edge(g.require_node("C"), g.require_node("A")).has_value()); // directed

    auto out = g.out_edges(g.require_node("A"));
    CHECK(out.size() == 2);
    CHECK(g.out_edges(g.require_node("C")).empty());

    // Re-adding a known node is a lookup, not a duplicate.
    CHECK(g.add_node("B") == g.require_node("B"));
    CHECK(g.node_count() == 3);
}

TEST_CASE("graph rejects malformed input", "[graph]") {
    Graph g;
    CHECK_THROWS_AS(g.add_edge("A", "B", 0.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge("A", "B", -1.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge("A", "A", 1.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge("", "B", 1.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge("A-B", "C", 1.0), ValidationError); // '-' reserved for path keys
    CHECK_THROWS_AS(g.add_edge("A,B", "C", 1.0), ValidationError);
    CHECK_THROWS_AS(g.add_edge("A B", "C", 1.0), ValidationError);

    g.add_edge("A", "B", 1.0);
    CHECK_THROWS_AS(g.add_edge("A", "B", 2.0), ValidationError); // duplicate
    CHECK_THROWS_AS(g.require_node("Z"), ValidationError);
}

TEST_CASE("graph text format parses comments and blanks", "[graph]") {
    std::istringstream in(
        "# demo graph\n"
        "\n"
        "A B 1.0\n"
        "  \n"
        "B C 2.5 # inline comment\n");
    Graph g = parse_graph(in, "demo");
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.edge(1).cost == 2.5);
    CHECK(g.edge(1).from == g.require_node("B"));
}

TEST_CASE("graph text format reports bad lines with numbers", "[graph]") {
    std::istringstream missing("A B 1.0\nA C\n");
    CHECK_THROWS_WITH(parse_graph(missing, "bad"), ContainsSubstring("bad:2"));

    std::istringstream extra("A B 1.0 7\n");
    CHECK_THROWS_WITH(parse_graph(extra, "bad"), ContainsSubstring("trailing token '7'"));

    std::istringstream badcost("A B zero\n");
    CHECK_THROWS_WITH(parse_graph(badcost, "bad"), ContainsSubstring("not a number"));

    std::istringstream dup("A B 1.0\nA B 2.0\n");
    CHECK_THROWS_WITH(parse_graph(dup, "bad"), ContainsSubstring("bad:2"));

    CHECK_THROWS_AS(load_graph("/nonexistent/graph.txt"), ValidationError);
}
