#include "scsim/repro.hpp"

#include <cmath>
#include <sstream>

#include "scsim/bayes.hpp"
#include "scsim/device.hpp"
#include "scsim/errors.hpp"

namespace scsim {

namespace {

constexpr std::size_t kStatBits = 100000;
const double kStatTol = 3.0 * std::sqrt(0.25 / static_cast<double>(kStatBits));

void add_check(ReproReport& report, const std::string& name, double expected,
               double measured, double tolerance) {
    bool pass = tolerance == 0.0 ? measured == expected
                                 : std::abs(measured - expected) <= tolerance;
    report.checks.push_back({name, expected, measured, tolerance, pass});
}

double gate_formula(GateKind kind, CorrRegime regime, double p, double q) {
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
            throw ValidationError("no statistical contract for " + gate_name(kind));
    }
}

ReproReport repro_gates(std::uint64_t seed) {
    ReproReport report;
    report.scenario = "fig2-gates";

    add_check(report, "drive-fit midpoint probability", 0.5, p_from_vin(2.24), 0.0);
    add_check(report, "reference-fit midpoint probability", 0.5, p_from_vref(0.57), 0.0);
    add_check(report, "drive-fit p=0.9 voltage", 2.8572, vin_from_p(0.9), 5e-4);
    add_check(report, "reference-fit p=0.9 voltage", 0.3789, vref_from_p(0.9), 5e-4);
    add_check(report, "drive-fit round trip p=0.37", 0.37,
              p_from_vin(vin_from_p(0.37)), 1e-12);

    const double p = 0.6, q = 0.3;
    int cell = 0;
    for (auto regime : {CorrRegime::Uncorrelated, CorrRegime::Positive, CorrRegime::Negative}) {
        auto [a, b] = correlated_pair(p, q, regime, kStatBits, derive_seed(seed, cell++));
        auto c = apply_gate(GateKind::And, {&a, &b});
        add_check(report, "AND " + corr_regime_name(regime),
                  gate_formula(GateKind::And, regime, p, q), estimate_probability(c),
                  kStatTol);
    }
    {
        SneUnit sel("s", make_taps({{0.5, false}}), LatentMode::Ideal, derive_seed(seed, cell++));
        auto s = sel.encode(kStatBits)[0];
        auto [a, b] =
            correlated_pair(0.2, 0.8, CorrRegime::Uncorrelated, kStatBits, derive_seed(seed, cell++));
        auto c = apply_gate(GateKind::Mux2, {&s, &a, &b});
        add_check(report, "MUX weighted addition", 0.5, estimate_probability(c), kStatTol);
    }

    // 100-bit demonstration streams, the illustrative operating point.
    std::ostringstream demo;
    auto [a100, b100] =
        correlated_pair(p, q, CorrRegime::Uncorrelated, 100, derive_seed(seed, cell++));
    auto c100 = apply_gate(GateKind::And, {&a100, &b100});
    demo << "a\t" << a100.to_string() << "\nb\t" << b100.to_string() << "\nand\t"
         << c100.to_string() << "\n";
    report.artifacts.emplace_back("gates_demo_100bit.tsv", demo.str());
    return report;
}

ReproReport repro_table(std::uint64_t seed) {
    ReproReport report;
    report.scenario = "table-s1";
    const double p = 0.6, q = 0.3, ps = 0.5;
    int cell = 0;
    for (auto regime : {CorrRegime::Uncorrelated, CorrRegime::Positive, CorrRegime::Negative}) {
        for (auto kind : {GateKind::And, GateKind::Or, GateKind::Xor}) {
            auto [a, b] = correlated_pair(p, q, regime, kStatBits, derive_seed(seed, cell++));
            auto c = apply_gate(kind, {&a, &b});
            add_check(report, gate_name(kind) + " " + corr_regime_name(regime),
                      gate_formula(kind, regime, p, q), estimate_probability(c), kStatTol);
        }
        // The MUX contract needs only an uncorrelated select; the mutual
        // regime of the data inputs does not enter the weighted addition.
        SneUnit sel("s", make_taps({{ps, false}}), LatentMode::Ideal,
                    derive_seed(seed, 1000 + cell));
        auto s = sel.encode(kStatBits)[0];
        auto [a, b] = correlated_pair(p, q, regime, kStatBits, derive_seed(seed, cell++));
        auto c = apply_gate(GateKind::Mux2, {&s, &a, &b});
        add_check(report, "MUX data-" + corr_regime_name(regime),
                  (1.0 - ps) * p + ps * q, estimate_probability(c), kStatTol);
    }
    return report;
}

ReproReport repro_inference(std::uint64_t seed) {
    ReproReport report;
    report.scenario = "fig3-inference";
    InferenceInstance inst{0.57, 0.72, 0.60};

    add_check(report, "analytic posterior", 0.6140035906642729, inst.analytic(), 1e-15);

    auto full = infer(inst, kStatBits, derive_seed(seed, 0));
    add_check(report, "simulated posterior (1e5 bits)", full.analytic, full.posterior, 0.025);
    for (const auto& e : full.correlations) {
        if (e.a == "B|A" && e.b == "B|!A")
            add_check(report, "shared-encoder pair SCC", 1.0, e.scc.value_or(0.0), 0.05);
        if (e.a == "A" && e.b == "B|A")
            add_check(report, "cross-encoder pair SCC", 0.0, e.scc.value_or(1.0), 0.05);
    }

    auto short_run = infer(inst, 100, derive_seed(seed, 1));
    add_check(report, "simulated posterior (100 bits)", short_run.analytic,
              short_run.posterior, 0.21);
    add_check(report, "frame latency (100 bits, s)", 0.4e-3, short_run.simulated_latency, 0.0);
    add_check(report, "throughput (fps)", 2500.0, 1.0 / short_run.simulated_latency, 0.0);

    std::ostringstream streams;
    auto netlist = build_inference_netlist("A", "B", inst.prior, inst.likelihood,
                                           inst.likelihood_neg);
    auto run = run_netlist(netlist, 100, derive_seed(seed, 1));
    for (const auto& key : {"A", "B|A", "B|!A", "num", "den", "q"})
        streams << key << '\t' << run.streams.at(key).to_string() << '\n';
    report.artifacts.emplace_back("inference_streams_100bit.tsv", streams.str());
    return report;
}

ReproReport repro_fusion(std::uint64_t seed) {
    ReproReport report;
    report.scenario = "fig4-fusion";

    auto two = fuse({{0.8, 0.6}, 0.5}, kStatBits, derive_seed(seed, 0));
    add_check(report, "two-modality fusion", 0.48 / 0.56, two.posterior, 0.02);
    auto three = fuse({{0.8, 0.6, 0.7}, 0.5}, kStatBits, derive_seed(seed, 1));
    add_check(report, "three-modality fusion", 0.336 / 0.36, three.posterior, 0.02);
    auto identity = fuse({{0.7, 0.5}, 0.5}, kStatBits, derive_seed(seed, 2));
    add_check(report, "uninformative modality identity", 0.7, identity.posterior, 0.01);
    add_check(report, "frame latency (100 bits, s)", 0.4e-3,
              frame_latency(100, MemristorParams{}), 0.0);
    return report;
}

ReproReport repro_device(std::uint64_t seed) {
    ReproReport report;
    report.scenario = "device-stats";
    MemristorParams params;
    OuParams ou;

    {
        Memristor dev(params, ou, SamplingMode::IidGaussian);
        Rng rng(derive_seed(seed, 0));
        const std::size_t n = 100000;
        double sum = 0.0, sumsq = 0.0;
        std::size_t switched = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = dev.sample_vth(rng);
            sum += v;
            sumsq += v * v;
            if (dev.switch_event(params.vth_mean, v)) ++switched;
        }
        double mean = sum / n;
        double sd = std::sqrt(sumsq / n - mean * mean);
        add_check(report, "threshold mean (V)", params.vth_mean, mean, 0.01);
        add_check(report, "threshold std (V)", params.vth_std, sd, 0.01);
        add_check(report, "switch fraction at the mean drive", 0.5,
                  static_cast<double>(switched) / n, 0.005);
        add_check(report, "energy accounting (J)",
                  static_cast<double>(dev.state().switch_count) * params.e_switch,
                  dev.state().energy_accumulated, 0.0);
    }
    {
        Memristor dev(params, ou, SamplingMode::OuProcess);
        Rng rng(derive_seed(seed, 1));
        const std::size_t n = 1000000;
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = dev.sample_vth(rng);
            sum += v;
            sumsq += v * v;
        }
        double mean = sum / n;
        double sd = std::sqrt(sumsq / n - mean * mean);
        add_check(report, "drift stationary mean (V)", ou.mu, mean, 0.01);
        add_check(report, "drift stationary std (V)", ou.stationary_std(), sd, 0.01);
    }
    add_check(report, "per-bit cycle budget (s)", 4e-6, params.cycle_budget, 0.0);
    add_check(report, "frame latency at 100 bits (s)", 0.4e-3, frame_latency(100, params), 0.0);
    return report;
}

}  // namespace

bool ReproReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string ReproReport::to_text() const {
    std::ostringstream os;
    os << "scenario: " << scenario << '\n';
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
        os << (c.pass ? "  [pass] " : "  [FAIL] ") << c.name
           << std::string(width - c.name.size() + 2, ' ') << "expected " << format_double(c.expected)
           << "  measured " << format_double(c.measured);
        if (c.tolerance > 0.0) os << "  (tol " << format_double(c.tolerance) << ")";
        os << '\n';
    }
    os << (all_pass() ? "all checks passed\n" : "SOME CHECKS FAILED\n");
    return os.str();
}

std::string ReproReport::to_csv() const {
    std::ostringstream os;
    os << "scenario,check,expected,measured,tolerance,pass\n";
    for (const auto& c : checks)
        os << scenario << ',' << c.name << ',' << format_double(c.expected) << ','
           << format_double(c.measured) << ',' << format_double(c.tolerance) << ','
           << (c.pass ? 1 : 0) << '\n';
    return os.str();
}

const std::vector<std::string>& repro_scenarios() {
    static const std::vector<std::string> names = {
        "fig2-gates", "fig3-inference", "fig4-fusion", "table-s1", "device-stats"};
    return names;
}

ReproReport run_repro(const std::string& scenario, std::uint64_t seed) {
    if (scenario == "fig2-gates") return repro_gates(seed);
    if (scenario == "fig3-inference") return repro_inference(seed);
    if (scenario == "fig4-fusion") return repro_fusion(seed);
    if (scenario == "table-s1") return repro_table(seed);
    if (scenario == "device-stats") return repro_device(seed);
    throw ValidationError("unknown scenario `" + scenario +
                          "`; expected one of: fig2-gates, fig3-inference, fig4-fusion, "
                          "table-s1, device-stats");
}

std::pair<StochasticNumber, StochasticNumber> correlated_pair(double p, double q,
                                                              CorrRegime regime,
                                                              std::size_t bits,
                                                              std::uint64_t seed,
                                                              LatentMode mode) {
    if (regime == CorrRegime::Uncorrelated) {
        SneUnit ua("a", make_taps({{p, false}}), mode, derive_seed(seed, 0));
        SneUnit ub("b", make_taps({{q, false}}), mode, derive_seed(seed, 1));
        return {ua.encode(bits)[0], ub.encode(bits)[0]};
    }
    bool negate_second = regime == CorrRegime::Negative;
    SneUnit unit("ab", make_taps({{p, false}, {q, negate_second}}), mode, derive_seed(seed, 0));
    auto streams = unit.encode(bits);
    return {std::move(streams[0]), std::move(streams[1])};
}

}  // namespace scsim
