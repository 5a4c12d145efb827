#include <doctest.h>

#include <cmath>

#include "scsim/netlist.hpp"

using namespace scsim;

namespace {

CircuitNetlist and_of_two_units(double p, double q) {
    CircuitNetlist n;
    n.sources.push_back({"a", "sne_a", p, false});
    n.sources.push_back({"b", "sne_b", q, false});
    n.nodes.push_back({"c", GateKind::And, {"a", "b"}});
    n.sinks.emplace_back("P(c)", "c");
    n.annotations.push_back({"a", "b", CorrRegime::Uncorrelated});
    return n;
}

}  // namespace

TEST_CASE("structural validation catches malformed graphs") {
    CircuitNetlist n = and_of_two_units(0.5, 0.5);
    CHECK_NOTHROW(n.validate());

    SUBCASE("duplicate ids") {
        n.nodes.push_back({"a", GateKind::Not, {"b"}});
        CHECK_THROWS_AS(n.validate(), NetlistInvalidError);
    }
    SUBCASE("bad arity") {
        n.nodes.push_back({"d", GateKind::Mux2, {"a", "b"}});
        CHECK_THROWS_AS(n.validate(), NetlistInvalidError);
    }
    SUBCASE("dangling input") {
        n.nodes.push_back({"d", GateKind::Not, {"ghost"}});
        CHECK_THROWS_AS(n.validate(), NetlistInvalidError);
    }
    SUBCASE("dangling sink") {
        n.sinks.emplace_back("x", "ghost");
        CHECK_THROWS_AS(n.validate(), NetlistInvalidError);
    }
    SUBCASE("combinational cycle") {
        n.nodes.push_back({"d", GateKind::And, {"e", "a"}});
        n.nodes.push_back({"e", GateKind::Not, {"d"}});
        CHECK_THROWS_AS(n.validate(), NetlistInvalidError);
    }
    SUBCASE("cycles through a flip-flop are sequential, not combinational") {
        n.nodes.push_back({"d", GateKind::And, {"e", "a"}});
        n.nodes.push_back({"e", GateKind::Dff, {"d"}});
        CHECK_NOTHROW(n.validate());
    }
    SUBCASE("source probability range") {
        n.sources[0].p = 1.5;
        CHECK_THROWS_AS(n.validate(), NetlistInvalidError);
    }
}

TEST_CASE("a one-gate netlist matches direct stream evaluation") {
    auto run = run_netlist(and_of_two_units(0.6, 0.5), 100000, 4242);
    CHECK(std::abs(run.sink_probabilities.at("P(c)") - 0.30) < 0.005);
    REQUIRE(run.correlations.size() == 1);
    CHECK_FALSE(run.correlations[0].violated);
    CHECK(run.warnings.empty());
    CHECK(run.simulated_latency == frame_latency(100000, MemristorParams{}));
}

TEST_CASE("netlist execution is bit-deterministic under a fixed seed") {
    auto a = run_netlist(and_of_two_units(0.4, 0.7), 5000, 9);
    auto b = run_netlist(and_of_two_units(0.4, 0.7), 5000, 9);
    CHECK(a.streams.at("c") == b.streams.at("c"));
    auto c = run_netlist(and_of_two_units(0.4, 0.7), 5000, 10);
    CHECK_FALSE(a.streams.at("c") == c.streams.at("c"));
}

TEST_CASE("an annotated-uncorrelated pair driven from one unit is flagged") {
    CircuitNetlist n;
    n.sources.push_back({"a", "shared", 0.5, false});
    n.sources.push_back({"b", "shared", 0.5, false});
    n.nodes.push_back({"c", GateKind::And, {"a", "b"}});
    n.sinks.emplace_back("P(c)", "c");
    n.annotations.push_back({"a", "b", CorrRegime::Uncorrelated});

    auto run = run_netlist(n, 100000, 77);
    REQUIRE(run.correlations.size() == 1);
    CHECK(run.correlations[0].violated);
    REQUIRE(!run.warnings.empty());
    CHECK(run.correlations[0].scc.value() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("a mux select sharing a unit with its data input is flagged") {
    CircuitNetlist n;
    n.sources.push_back({"s", "shared", 0.5, false});
    n.sources.push_back({"b", "shared", 0.7, false});
    n.sources.push_back({"a", "other", 0.2, false});
    n.nodes.push_back({"c", GateKind::Mux2, {"s", "a", "b"}});
    n.sinks.emplace_back("P(c)", "c");
    auto run = run_netlist(n, 100000, 5);
    REQUIRE(!run.warnings.empty());
    CHECK(run.warnings[0].message.find("select") != std::string::npos);
}

TEST_CASE("the divider feedback mux is not treated as an ordinary select") {
    CircuitNetlist n;
    n.sources.push_back({"num", "shared", 0.3, false});
    n.sources.push_back({"den", "shared", 0.6, false});
    n.nodes.push_back({"q", GateKind::Mux2, {"den", "qd", "num"}});
    n.nodes.push_back({"qd", GateKind::Dff, {"q"}});
    n.sinks.emplace_back("quotient", "q");

    auto run = run_netlist(n, 100000, 31);
    CHECK(run.warnings.empty());
    CHECK(std::abs(run.sink_probabilities.at("quotient") - 0.5) < 0.02);
}

TEST_CASE("a fused divider node behaves exactly like the mux plus flip-flop") {
    CircuitNetlist fused;
    fused.sources.push_back({"num", "shared", 0.3, false});
    fused.sources.push_back({"den", "shared", 0.6, false});
    fused.nodes.push_back({"q", GateKind::Cordiv, {"num", "den"}});
    fused.sinks.emplace_back("quotient", "q");

    CircuitNetlist composed;
    composed.sources = fused.sources;
    composed.nodes.push_back({"q", GateKind::Mux2, {"den", "qd", "num"}});
    composed.nodes.push_back({"qd", GateKind::Dff, {"q"}});
    composed.sinks.emplace_back("quotient", "q");

    auto a = run_netlist(fused, 20000, 321);
    auto b = run_netlist(composed, 20000, 321);
    CHECK(a.streams.at("q") == b.streams.at("q"));
}

TEST_CASE("device-backed execution books switching energy") {
    auto run = run_netlist(and_of_two_units(0.6, 0.5), 2000, 5, LatentMode::DeviceBacked);
    CHECK(run.energy > 0.0);
    CHECK(std::abs(run.sink_probabilities.at("P(c)") - 0.30) < 0.05);
}

TEST_CASE("netlist text round-trips") {
    auto n = and_of_two_units(0.57, 0.72);
    n.sources.push_back({"nb", "sne_b", 0.25, true});
    n.nodes.push_back({"d", GateKind::Not, {"nb"}});
    std::string text = emit_netlist(n);
    auto loaded = load_netlist(text);
    CHECK(emit_netlist(loaded) == text);
    CHECK(loaded.sources.size() == 3);
    CHECK(loaded.sources[2].negated);
    CHECK(loaded.nodes[1].kind == GateKind::Not);
}

TEST_CASE("canonical text loads byte-identically") {
    std::string text =
        "source a sne_a 0.57\n"
        "source b sne_b 0.72\n"
        "c AND a b\n"
        "sink P(c) c\n"
        "corr a b uncorrelated\n";
    CHECK(emit_netlist(load_netlist(text)) == text);
}

TEST_CASE("netlist parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(load_netlist("source a\n", "x.snet"),
                         doctest::Contains("x.snet:1"), ParseError);
    CHECK_THROWS_WITH_AS(load_netlist("source a sne_a 1.5\n", "x.snet"),
                         doctest::Contains("outside [0,1]"), ParseError);
    CHECK_THROWS_WITH_AS(load_netlist("n FROB a b\n", "x.snet"),
                         doctest::Contains("unknown gate kind"), ParseError);
    CHECK_THROWS_WITH_AS(load_netlist("source a sne_a 0.5\nc AND a ghost\n", "x.snet"),
                         doctest::Contains("ghost"), ParseError);
    CHECK_THROWS_WITH_AS(load_netlist("corr a b sideways\n", "x.snet"),
                         doctest::Contains("regime"), ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
    std::string text =
        "# demo\n"
        "\n"
        "source a sne_a 0.5   # the only source\n"
        "c NOT a\n"
        "sink out c\n";
    auto n = load_netlist(text);
    CHECK(n.sources.size() == 1);
    CHECK(n.nodes.size() == 1);
}
