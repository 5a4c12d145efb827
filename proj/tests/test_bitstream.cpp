#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "scsim/bitstream.hpp"
#include "scsim/errors.hpp"
#include "scsim/random.hpp"

using namespace scsim;

namespace {

StochasticNumber random_stream(Rng& rng, std::size_t n, double p) {
    StochasticNumber sn(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.uniform01() < p) sn.set_bit(i, true);
    return sn;
}

}  // namespace

TEST_CASE("probability estimate counts 1-bits") {
    CHECK(estimate_probability(StochasticNumber::from_string("1010")) == 0.5);
    CHECK(estimate_probability(StochasticNumber::from_string("1111")) == 1.0);

    // 100-bit stream carrying 57 ones encodes 0.57
    StochasticNumber sn(100);
    for (std::size_t i = 0; i < 57; ++i) sn.set_bit(i, true);
    CHECK(estimate_probability(sn) == 0.57);

    CHECK_THROWS_AS(estimate_probability(StochasticNumber{}), ValidationError);
}

TEST_CASE("probability estimate is permutation invariant") {
    Rng rng(11);
    auto sn = random_stream(rng, 999, 0.37);
    double before = estimate_probability(sn);
    // rotate the bit string
    std::string s = sn.to_string();
    std::rotate(s.begin(), s.begin() + 123, s.end());
    CHECK(estimate_probability(StochasticNumber::from_string(s)) == before);
}

TEST_CASE("pair counts tally positionwise") {
    auto x = StochasticNumber::from_string("1010");
    auto y = StochasticNumber::from_string("0101");
    auto pc = pair_counts(x, y);
    CHECK(pc.n11 == 0);
    CHECK(pc.n10 == 2);
    CHECK(pc.n01 == 2);
    CHECK(pc.n00 == 0);

    auto z = StochasticNumber::from_string("1100");
    pc = pair_counts(z, z);
    CHECK(pc.n11 == 2);
    CHECK(pc.n10 == 0);
    CHECK(pc.n01 == 0);
    CHECK(pc.n00 == 2);

    pc = pair_counts(StochasticNumber::from_string("1110"), StochasticNumber::from_string("1010"));
    CHECK(pc.n11 == 2);
    CHECK(pc.n10 == 1);
    CHECK(pc.n01 == 0);
    CHECK(pc.n00 == 1);
    CHECK(pc.total() == 4);

    CHECK_THROWS_AS(pair_counts(x, StochasticNumber::from_string("10")), ValidationError);
}

TEST_CASE("pair counts sum to the stream length") {
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 300);
        auto x = random_stream(rng, n, 0.4);
        auto y = random_stream(rng, n, 0.7);
        CHECK(pair_counts(x, y).total() == n);
    }
}

TEST_CASE("pearson on constructed streams") {
    auto x = StochasticNumber::from_string("1010");
    CHECK(pearson(x, x) == 1.0);
    CHECK(pearson(x, StochasticNumber::from_string("0101")) == -1.0);

    CHECK_THROWS_AS(pearson(StochasticNumber::from_string("1111"), x),
                    UndefinedCorrelationError);
    CHECK_THROWS_AS(pearson(x, StochasticNumber::from_string("0000")),
                    UndefinedCorrelationError);
}

TEST_CASE("scc on constructed streams") {
    auto x = StochasticNumber::from_string("1010");
    CHECK(scc(x, x) == 1.0);
    CHECK(scc(x, StochasticNumber::from_string("0101")) == -1.0);
    CHECK_THROWS_AS(scc(StochasticNumber::from_string("1111"),
                        StochasticNumber::from_string("1111")),
                    UndefinedCorrelationError);
}

TEST_CASE("independent streams measure near-zero correlation") {
    Rng rng(42);
    auto x = random_stream(rng, 100000, 0.5);
    auto y = random_stream(rng, 100000, 0.5);
    CHECK(std::abs(pearson(x, y)) < 0.01);
    CHECK(std::abs(scc(x, y)) < 0.01);
}

TEST_CASE("correlation metrics are symmetric and self-maximal") {
    Rng rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        auto x = random_stream(rng, 257, 0.3);
        auto y = random_stream(rng, 257, 0.6);
        if (x.ones() == 0 || x.ones() == x.length()) continue;
        if (y.ones() == 0 || y.ones() == y.length()) continue;
        CHECK(pearson(x, y) == doctest::Approx(pearson(y, x)).epsilon(1e-12));
        CHECK(scc(x, y) == doctest::Approx(scc(y, x)).epsilon(1e-12));
        CHECK(pearson(x, x) == 1.0);
        CHECK(scc(x, x) == 1.0);
    }
}

TEST_CASE("text serialization round-trips") {
    Rng rng(100);
    auto sn = random_stream(rng, 130, 0.42);
    std::stringstream ss;
    sn.write_text(ss);
    CHECK(StochasticNumber::read_text(ss) == sn);
}

TEST_CASE("binary serialization uses LSB-first packing") {
    auto sn = StochasticNumber::from_string("1011");
    std::stringstream ss;
    sn.write_binary(ss);
    std::string bytes = ss.str();
    REQUIRE(bytes.size() == 9);
    CHECK(static_cast<unsigned char>(bytes[0]) == 4);  // little-endian length
    for (int i = 1; i < 8; ++i) CHECK(bytes[i] == 0);
    CHECK(static_cast<unsigned char>(bytes[8]) == 0b1101);

    ss.seekg(0);
    CHECK(StochasticNumber::read_binary(ss) == sn);
}

TEST_CASE("binary serialization round-trips odd lengths") {
    Rng rng(77);
    for (std::size_t n : {1u, 63u, 64u, 65u, 100u, 1000u}) {
        auto sn = random_stream(rng, n, 0.5);
        std::stringstream ss;
        sn.write_binary(ss);
        CHECK(StochasticNumber::read_binary(ss) == sn);
    }
}
