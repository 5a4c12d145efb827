#include <doctest.h>

#include <array>
#include <cmath>

#include "scsim/gates.hpp"
#include "scsim/repro.hpp"

using namespace scsim;

namespace {

// Statistical contracts of the probabilistic gates, per correlation regime.
// Kept separate from the implementation as the test oracle.
double oracle(GateKind kind, CorrRegime regime, double p, double q) {
    switch (kind) {
        case GateKind::And:
            if (regime == CorrRegime::Uncorrelated) return p * q;
            if (regime == CorrRegime::Positive) return std::min(p, q);
            return std::max(p + q - 1.0, 0.0);
        case GateKind::Or:
            if (regime == CorrRegime::Uncorrelated) return p + q - p * q;
            if (regime == CorrRegime::Positive) return std::max(p, q);
            return std::min(1.0, p + q);
        case GateKind::Xor:
            if (regime == CorrRegime::Uncorrelated) return p + q - 2.0 * p * q;
            if (regime == CorrRegime::Positive) return std::abs(p - q);
            return p + q <= 1.0 ? p + q : 2.0 - (p + q);
        default:
            return -1.0;
    }
}

}  // namespace

TEST_CASE("gate names and arities round-trip") {
    for (auto kind : {GateKind::And, GateKind::Or, GateKind::Xor, GateKind::Not,
                      GateKind::Mux2, GateKind::Mux4, GateKind::Dff, GateKind::Cordiv})
        CHECK(gate_from_name(gate_name(kind)) == kind);
    CHECK_THROWS_AS(gate_from_name("NAND"), ValidationError);
    CHECK(gate_arity(GateKind::Mux4) == 6);
    CHECK(gate_arity(GateKind::Mux2) == 3);
}

TEST_CASE("single-cycle gate semantics") {
    GateState st;
    auto step = [&st](GateKind k, std::initializer_list<bool> in) {
        std::array<bool, 6> buf{};
        std::size_t i = 0;
        for (bool b : in) buf[i++] = b;
        return eval_gate_step(k, std::span<const bool>(buf.data(), in.size()), st);
    };

    CHECK(step(GateKind::And, {true, true}));
    CHECK_FALSE(step(GateKind::And, {true, false}));
    CHECK(step(GateKind::Or, {false, true}));
    CHECK(step(GateKind::Xor, {true, false}));
    CHECK_FALSE(step(GateKind::Xor, {true, true}));
    CHECK_FALSE(step(GateKind::Not, {true}));

    // MUX2: select routes data1 when high
    CHECK(step(GateKind::Mux2, {true, false, true}));
    CHECK_FALSE(step(GateKind::Mux2, {true, true, false}));
    CHECK(step(GateKind::Mux2, {false, true, false}));

    // MUX4 select index is sel_hi*2 + sel_lo
    CHECK(step(GateKind::Mux4, {false, false, true, false, false, false}));
    CHECK(step(GateKind::Mux4, {false, true, false, true, false, false}));
    CHECK(step(GateKind::Mux4, {true, false, false, false, true, false}));
    CHECK(step(GateKind::Mux4, {true, true, false, false, false, true}));

    // DFF: returns the previous input, starting at 0
    st = GateState{};
    CHECK_FALSE(step(GateKind::Dff, {true}));
    CHECK(step(GateKind::Dff, {false}));
    CHECK_FALSE(step(GateKind::Dff, {true}));

    // CORDIV: numerator while the denominator is high, held quotient otherwise
    st = GateState{};
    CHECK(step(GateKind::Cordiv, {true, true}));
    CHECK(step(GateKind::Cordiv, {false, false}));   // holds 1
    CHECK_FALSE(step(GateKind::Cordiv, {false, true}));
    CHECK_FALSE(step(GateKind::Cordiv, {true, false}));  // holds 0
}

TEST_CASE("flip-flop delays its stream by exactly one cycle") {
    auto in = StochasticNumber::from_string("1101001110");
    auto out = apply_gate(GateKind::Dff, {&in});
    CHECK_FALSE(out.bit(0));
    for (std::size_t i = 1; i < in.length(); ++i) CHECK(out.bit(i) == in.bit(i - 1));
}

TEST_CASE("gate statistical contracts hold on a probability grid") {
    const std::size_t bits = 20000;
    const double tol = 4.2 * std::sqrt(0.25 / static_cast<double>(bits));
    std::uint64_t salt = 0;
    for (auto kind : {GateKind::And, GateKind::Or, GateKind::Xor}) {
        for (auto regime :
             {CorrRegime::Uncorrelated, CorrRegime::Positive, CorrRegime::Negative}) {
            for (double p = 0.1; p < 0.95; p += 0.2) {
                for (double q = 0.1; q < 0.95; q += 0.2) {
                    auto [a, b] = correlated_pair(p, q, regime, bits, derive_seed(99, salt++));
                    auto c = apply_gate(kind, {&a, &b});
                    double expected = oracle(kind, regime, p, q);
                    CHECK_MESSAGE(
                        std::abs(estimate_probability(c) - expected) <= tol,
                        gate_name(kind) << " " << corr_regime_name(regime) << " p=" << p
                                        << " q=" << q);
                }
            }
        }
    }
}

TEST_CASE("mux weighted addition tolerates correlated data inputs") {
    const std::size_t bits = 20000;
    const double tol = 4.2 * std::sqrt(0.25 / static_cast<double>(bits));
    std::uint64_t salt = 500;
    for (auto regime :
         {CorrRegime::Uncorrelated, CorrRegime::Positive, CorrRegime::Negative}) {
        SneUnit sel("s", make_taps({{0.3, false}}), LatentMode::Ideal, derive_seed(7, salt++));
        auto s = sel.encode(bits)[0];
        auto [a, b] = correlated_pair(0.2, 0.8, regime, bits, derive_seed(7, salt++));
        auto c = apply_gate(GateKind::Mux2, {&s, &a, &b});
        CHECK(std::abs(estimate_probability(c) - (0.7 * 0.2 + 0.3 * 0.8)) <= tol);
    }
}

TEST_CASE("correlated division approximates the quotient") {
    auto [num, den] = correlated_pair(0.3, 0.6, CorrRegime::Positive, 100000, 11);
    auto q = cordiv(num, den);
    CHECK(std::abs(estimate_probability(q) - 0.5) < 0.02);

    // the worked inference operands
    auto [n2, d2] = correlated_pair(0.4104, 0.6684, CorrRegime::Positive, 100000, 12);
    auto q2 = cordiv(n2, d2);
    CHECK(std::abs(estimate_probability(q2) - 0.4104 / 0.6684) < 0.02);
}

TEST_CASE("dividing a stream by itself locks to one after the first 1-bit") {
    auto s = encode({{0.7, false}}, 1000, LatentMode::Ideal, 13)[0];
    auto q = cordiv(s, s);
    bool seen_one = false;
    for (std::size_t i = 0; i < s.length(); ++i) {
        if (s.bit(i)) seen_one = true;
        CHECK(q.bit(i) == seen_one);
    }
}

TEST_CASE("division preconditions are checked") {
    auto zero = StochasticNumber(64);
    auto ones = StochasticNumber::from_string("1111");
    CHECK_THROWS_AS(cordiv(ones, StochasticNumber(4)), DivisionUndefinedError);
    CHECK_THROWS_AS(cordiv(ones, zero), ValidationError);  // length mismatch

    // independently generated operands violate the correlation precondition
    SneUnit a("a", make_taps({{0.3, false}}), LatentMode::Ideal, 21);
    SneUnit b("b", make_taps({{0.6, false}}), LatentMode::Ideal, 22);
    auto num = a.encode(20000)[0];
    auto den = b.encode(20000)[0];
    std::vector<ContractWarning> warnings;
    cordiv(num, den, &warnings);
    REQUIRE(!warnings.empty());
    CHECK(warnings[0].where == "cordiv");

    // shared-unit operands do not warn
    warnings.clear();
    auto [n2, d2] = correlated_pair(0.3, 0.6, CorrRegime::Positive, 20000, 23);
    cordiv(n2, d2, &warnings);
    CHECK(warnings.empty());
}

TEST_CASE("apply_gate validates inputs") {
    auto s = StochasticNumber::from_string("1010");
    auto t = StochasticNumber::from_string("10");
    CHECK_THROWS_AS(apply_gate(GateKind::And, {&s}), ValidationError);
    CHECK_THROWS_AS(apply_gate(GateKind::And, {&s, &t}), ValidationError);
}
