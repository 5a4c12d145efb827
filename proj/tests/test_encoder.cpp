#include <doctest.h>

#include <cmath>

#include "scsim/encoder.hpp"
#include "scsim/errors.hpp"

using namespace scsim;

TEST_CASE("voltage fits hit their midpoints and saturate") {
    CHECK(p_from_vin(2.24) == 0.5);
    CHECK(p_from_vref(0.57) == 0.5);
    CHECK(p_from_vin(50.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p_from_vref(50.0) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("fit inverses match the closed forms") {
    CHECK(vin_from_p(0.5) == doctest::Approx(2.24).epsilon(1e-12));
    CHECK(vin_from_p(0.9) == doctest::Approx(2.24 + std::log(9.0) / 3.56).epsilon(1e-12));
    CHECK(vin_from_p(0.9) == doctest::Approx(2.8572).epsilon(1e-4));
    CHECK(vin_from_p(0.1) == doctest::Approx(1.6228).epsilon(1e-4));
    CHECK(vref_from_p(0.5) == doctest::Approx(0.57).epsilon(1e-12));
    CHECK(vref_from_p(0.9) == doctest::Approx(0.3789).epsilon(1e-3));
    CHECK(p_from_vin(2.857) == doctest::Approx(0.9).epsilon(2e-3));

    CHECK_THROWS_AS(vin_from_p(0.0), ValidationError);
    CHECK_THROWS_AS(vin_from_p(1.0), ValidationError);
    CHECK_THROWS_AS(vref_from_p(-0.1), ValidationError);
}

TEST_CASE("fit inversion round-trips to 1e-12 across the probability range") {
    for (double p = 1e-6; p < 1.0 - 1e-7; p += (p < 1e-3 ? p : 1e-3)) {
        CHECK(std::abs(p_from_vin(vin_from_p(p)) - p) < 1e-12);
        CHECK(std::abs(p_from_vref(vref_from_p(p)) - p) < 1e-12);
    }
    double edge = 1.0 - 1e-6;
    CHECK(std::abs(p_from_vin(vin_from_p(edge)) - edge) < 1e-12);
    CHECK(std::abs(p_from_vref(vref_from_p(edge)) - edge) < 1e-12);
}

TEST_CASE("shared-unit taps couple comonotonically") {
    auto streams = encode({{0.6, false}, {0.3, false}}, 100000, LatentMode::Ideal, 17);
    REQUIRE(streams.size() == 2);

    double p0 = estimate_probability(streams[0]);
    double p1 = estimate_probability(streams[1]);
    CHECK(std::abs(p0 - 0.6) < 0.01);
    CHECK(std::abs(p1 - 0.3) < 0.01);
    CHECK(scc(streams[0], streams[1]) == doctest::Approx(1.0).epsilon(0.02));

    // bit-wise implication: every 1 of the smaller-target stream lies in the larger
    for (std::size_t w = 0; w < streams[1].words().size(); ++w)
        CHECK((streams[1].words()[w] & ~streams[0].words()[w]) == 0);

    // the AND of nested streams carries the smaller probability (min rule)
    std::size_t ones = 0;
    for (std::size_t i = 0; i < streams[0].length(); ++i)
        if (streams[0].bit(i) && streams[1].bit(i)) ++ones;
    CHECK(std::abs(static_cast<double>(ones) / 100000 - 0.3) < 0.005);
}

TEST_CASE("negated taps deliver their target with complement coupling") {
    auto streams = encode({{0.6, false}, {0.6, true}}, 100000, LatentMode::Ideal, 23);
    CHECK(std::abs(estimate_probability(streams[0]) - 0.6) < 0.01);
    CHECK(std::abs(estimate_probability(streams[1]) - 0.6) < 0.01);
    CHECK(scc(streams[0], streams[1]) == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("distinct units are statistically independent") {
    SneUnit a("a", make_taps({{0.5, false}}), LatentMode::Ideal, 41);
    SneUnit b("b", make_taps({{0.5, false}}), LatentMode::Ideal, 42);
    auto sa = a.encode(100000)[0];
    auto sb = b.encode(100000)[0];
    CHECK(std::abs(pearson(sa, sb)) < 0.01);
}

TEST_CASE("measured probability stays inside the binomial envelope") {
    const std::size_t bits = 1000;
    int failures = 0;
    int runs = 0;
    for (double target : {0.1, 0.37, 0.5, 0.82}) {
        double bound = 3.0 * std::sqrt(target * (1.0 - target) / bits);
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            auto s = encode({{target, false}}, bits, LatentMode::Ideal,
                            derive_seed(1234, seed))[0];
            if (std::abs(estimate_probability(s) - target) > bound) ++failures;
            ++runs;
        }
    }
    // 3-sigma bound: expect ~0.27% of runs outside; allow a generous margin
    CHECK(failures <= runs / 50);
}

TEST_CASE("device-backed and ideal modes are distributionally indistinguishable") {
    const std::size_t n = 100000;
    for (double target : {0.2, 0.5, 0.73}) {
        auto ideal = encode({{target, false}}, n, LatentMode::Ideal, 7)[0];
        auto device = encode({{target, false}}, n, LatentMode::DeviceBacked, 8)[0];
        double p1 = estimate_probability(ideal);
        double p2 = estimate_probability(device);
        double pooled = (p1 + p2) / 2.0;
        double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / n);
        CHECK(std::abs(p1 - p2) <= 3.0 * se);
    }
}

TEST_CASE("device-backed taps keep the unit coupling semantics") {
    auto streams =
        encode({{0.6, false}, {0.3, false}, {0.6, true}}, 100000, LatentMode::DeviceBacked, 5);
    CHECK(scc(streams[0], streams[1]) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(scc(streams[0], streams[2]) == doctest::Approx(-1.0).epsilon(0.02));
    for (std::size_t w = 0; w < streams[1].words().size(); ++w)
        CHECK((streams[1].words()[w] & ~streams[0].words()[w]) == 0);
}

TEST_CASE("degenerate targets produce constant streams in both modes") {
    for (auto mode : {LatentMode::Ideal, LatentMode::DeviceBacked}) {
        auto streams = encode({{0.0, false}, {1.0, false}, {1.0, true}}, 500, mode, 3);
        CHECK(streams[0].ones() == 0);
        CHECK(streams[1].ones() == 500);
        CHECK(streams[2].ones() == 500);
    }
}

TEST_CASE("voltage metadata uses the drive fit for the first tap only") {
    auto taps = make_taps({{0.5, false}, {0.9, false}, {0.0, false}});
    REQUIRE(taps.size() == 3);
    CHECK(taps[0].vin.has_value());
    CHECK(*taps[0].vin == doctest::Approx(2.24));
    CHECK_FALSE(taps[0].vref.has_value());
    CHECK(taps[1].vref.has_value());
    CHECK(*taps[1].vref == doctest::Approx(0.3789).epsilon(1e-3));
    CHECK_FALSE(taps[2].vin.has_value());  // no finite voltage reaches 0
    CHECK_FALSE(taps[2].vref.has_value());
}

TEST_CASE("encoding is deterministic for a fixed seed") {
    auto a = encode({{0.42, false}}, 2048, LatentMode::Ideal, 77)[0];
    auto b = encode({{0.42, false}}, 2048, LatentMode::Ideal, 77)[0];
    CHECK(a == b);
    auto c = encode({{0.42, false}}, 2048, LatentMode::DeviceBacked, 77)[0];
    auto d = encode({{0.42, false}}, 2048, LatentMode::DeviceBacked, 77)[0];
    CHECK(c == d);
}

TEST_CASE("invalid encoder configurations are rejected") {
    CHECK_THROWS_AS(SneUnit("x", {}, LatentMode::Ideal, 1), ValidationError);
    CHECK_THROWS_AS(encode({{1.5, false}}, 100, LatentMode::Ideal, 1), ValidationError);
    CHECK_THROWS_AS(encode({{0.5, false}}, 0, LatentMode::Ideal, 1), ValidationError);
}
