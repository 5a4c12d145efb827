#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "scsim/device.hpp"
#include "scsim/errors.hpp"

using namespace scsim;

TEST_CASE("parameter invariants are enforced") {
    MemristorParams p;
    CHECK_NOTHROW(p.validate());

    MemristorParams bad = p;
    bad.vhold_mean = 3.0;  // above vth_mean
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = p;
    bad.t_relax = 10e-9;  // below t_switch
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = p;
    bad.cycle_budget = 0.5e-6;  // cannot cover switch + relax
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    OuParams ou;
    CHECK_NOTHROW(ou.validate());
    ou.theta = 0.0;
    CHECK_THROWS_AS(ou.validate(), ValidationError);
}

TEST_CASE("iid threshold samples reproduce the measured distribution") {
    MemristorParams params;
    Memristor dev(params, OuParams{}, SamplingMode::IidGaussian);
    Rng rng(2024);

    const std::size_t n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = dev.sample_vth(rng);
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n;
    double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::abs(mean - 2.08) < 0.01);
    CHECK(std::abs(sd - 0.28) < 0.01);
    CHECK(dev.state().cycle_count == n);
}

TEST_CASE("zero-diffusion drift decays monotonically to the asymptote") {
    OuParams ou;
    ou.sigma = 0.0;
    Memristor dev(MemristorParams{}, ou, SamplingMode::OuProcess);
    dev.state().current_vth = 3.0;

    Rng rng(1);
    double prev = 3.0;
    for (int i = 0; i < 200; ++i) {
        double v = dev.sample_vth(rng);
        CHECK(v < prev);
        CHECK(v > ou.mu);
        prev = v;
    }
    CHECK(prev == doctest::Approx(ou.mu).epsilon(1e-6));
}

TEST_CASE("drift process reaches the stationary threshold statistics") {
    OuParams ou;  // defaults: theta 0.1, stationary std 0.28
    CHECK(ou.stationary_std() == doctest::Approx(0.28).epsilon(1e-12));

    Memristor dev(MemristorParams{}, ou, SamplingMode::OuProcess);
    Rng rng(99);
    const std::size_t n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = dev.sample_vth(rng);
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n;
    double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::abs(mean - ou.mu) < 0.01);
    CHECK(std::abs(sd - 0.28) < 0.01);
}

TEST_CASE("switch events compare drive against the sampled threshold") {
    MemristorParams params;
    Memristor dev(params, OuParams{}, SamplingMode::IidGaussian);
    Rng rng(7);

    // a 10 V programming pulse always switches
    for (int i = 0; i < 1000; ++i) CHECK(dev.switch_event(10.0, dev.sample_vth(rng)));
    // zero drive never does
    CHECK_FALSE(dev.switch_event(0.0, dev.sample_vth(rng)));
    CHECK_THROWS_AS(dev.switch_event(-1.0, 2.0), ValidationError);

    // driving at the mean threshold switches half the time
    std::size_t hits = 0;
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i)
        if (dev.switch_event(params.vth_mean, dev.sample_vth(rng))) ++hits;
    CHECK(std::abs(static_cast<double>(hits) / n - 0.5) < 0.005);
}

TEST_CASE("energy accounting is exactly count times switch energy") {
    MemristorParams params;
    Memristor dev(params, OuParams{}, SamplingMode::IidGaussian);
    Rng rng(13);
    for (int i = 0; i < 12345; ++i) dev.switch_event(10.0, dev.sample_vth(rng));
    CHECK(dev.state().switch_count == 12345);
    CHECK(dev.state().energy_accumulated == 12345.0 * params.e_switch);
}

TEST_CASE("threshold trajectory is reproducible under a fixed seed") {
    for (auto mode : {SamplingMode::IidGaussian, SamplingMode::OuProcess}) {
        Memristor a(MemristorParams{}, OuParams{}, mode);
        Memristor b(MemristorParams{}, OuParams{}, mode);
        Rng ra(555), rb(555);
        for (int i = 0; i < 500; ++i) CHECK(a.sample_vth(ra) == b.sample_vth(rb));
    }
}

TEST_CASE("switch outcomes do not feed back into the threshold trajectory") {
    // volatility contract: no conductive state carries across cycles
    Memristor with_events(MemristorParams{}, OuParams{}, SamplingMode::OuProcess);
    Memristor without(MemristorParams{}, OuParams{}, SamplingMode::OuProcess);
    Rng ra(31), rb(31);
    for (int i = 0; i < 300; ++i) {
        double va = with_events.sample_vth(ra);
        with_events.switch_event(10.0, va);  // always fires
        CHECK(va == without.sample_vth(rb));
    }
}

TEST_CASE("exceeding demonstrated endurance warns but keeps running") {
    Memristor dev(MemristorParams{}, OuParams{}, SamplingMode::IidGaussian);
    Rng rng(3);
    dev.state().cycle_count = kEnduranceCycles - 1;
    CHECK_FALSE(dev.state().endurance_exceeded);
    dev.sample_vth(rng);
    CHECK_FALSE(dev.state().endurance_exceeded);
    dev.sample_vth(rng);
    CHECK(dev.state().endurance_exceeded);
    CHECK_NOTHROW(dev.sample_vth(rng));
}

TEST_CASE("frame latency scales linearly on the per-bit budget") {
    MemristorParams params;
    CHECK(frame_latency(100, params) == 0.4e-3);
    CHECK(frame_latency(1, params) == 4e-6);
    CHECK(frame_latency(1000, params) == 4e-3);
    CHECK(1.0 / frame_latency(100, params) == 2500.0);
    CHECK_THROWS_AS(frame_latency(0, params), ValidationError);
}

TEST_CASE("parameter files round-trip and reject unknown keys") {
    MemristorParams p;
    p.vth_mean = 2.5;
    p.cycle_budget = 8e-6;

    std::string path = "device_params_test.tmp";
    {
        std::ofstream f(path);
        p.write(f);
    }
    auto q = MemristorParams::from_file(path);
    CHECK(q.vth_mean == doctest::Approx(2.5));
    CHECK(q.cycle_budget == doctest::Approx(8e-6));

    {
        std::ofstream f(path);
        f << "vth_typo = 1.0\n";
    }
    CHECK_THROWS_AS(MemristorParams::from_file(path), ValidationError);
    std::remove(path.c_str());
}
