// scsim command-line front end: stochastic encoding, probabilistic gates,
// Bayesian inference/fusion operators, network compilation, and canned
// reproduction scenarios.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scsim/bayes.hpp"
#include "scsim/compiler.hpp"
#include "scsim/detections.hpp"
#include "scsim/repro.hpp"

using namespace scsim;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t bits = 100;
    std::string mode = "ideal";
    std::string out;
    std::string format = "json";
    std::string device_params;

    LatentMode latent_mode() const {
        return mode == "device" ? LatentMode::DeviceBacked : LatentMode::Ideal;
    }
    MemristorParams params() const {
        return device_params.empty() ? MemristorParams{}
                                     : MemristorParams::from_file(device_params);
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "random seed (drawn from entropy when omitted)")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--bits", opts.bits, "stream length in bits")->check(CLI::PositiveNumber);
    cmd->add_option("--mode", opts.mode, "latent source: ideal or device")
        ->check(CLI::IsMember({"ideal", "device"}));
    cmd->add_option("--out", opts.out, "output path (stdout when omitted)");
    cmd->add_option("--format", opts.format, "report encoding")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--device-params", opts.device_params,
                    "device parameter file (key = value lines)");
}

std::uint64_t resolve_seed(CommonOpts& opts) {
    if (!opts.seed_given) {
        std::random_device rd;
        opts.seed = (std::uint64_t{rd()} << 32) ^ rd();
        std::cerr << "seed: " << opts.seed << "\n";
    }
    return opts.seed;
}

void write_output(const CommonOpts& opts, const std::string& content) {
    if (opts.out.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(opts.out);
    if (!f) throw ValidationError("cannot open output file: " + opts.out);
    f << content;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot open output file: " + path);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int report_warnings(const std::vector<ContractWarning>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "contract violation [" << w.where << "]: " << w.message
                  << " (measured " << format_double(w.measured) << ")\n";
    return warnings.empty() ? 0 : 2;
}

// ---- encode ---------------------------------------------------------------

int cmd_encode(CommonOpts& opts, const std::vector<double>& targets,
               const std::vector<std::size_t>& negate) {
    std::uint64_t seed = resolve_seed(opts);
    std::vector<std::pair<double, bool>> tap_spec;
    for (std::size_t i = 0; i < targets.size(); ++i) tap_spec.emplace_back(targets[i], false);
    for (std::size_t idx : negate) {
        if (idx >= tap_spec.size())
            throw ValidationError("--negate index " + std::to_string(idx) +
                                  " out of range (taps: " + std::to_string(tap_spec.size()) + ")");
        tap_spec[idx].second = true;
    }

    auto taps = make_taps(tap_spec);
    SneUnit unit("sne0", taps, opts.latent_mode(), seed, opts.params());
    auto streams = unit.encode(opts.bits);

    std::ostringstream text;
    for (const auto& s : streams) text << s.to_string() << '\n';
    write_output(opts, text.str());

    nlohmann::json j;
    j["bits"] = opts.bits;
    j["seed"] = seed;
    j["mode"] = opts.mode;
    std::ostringstream csv;
    csv << "tap,target,negated,measured,vin,vref\n";
    for (std::size_t i = 0; i < taps.size(); ++i) {
        double measured = estimate_probability(streams[i]);
        nlohmann::json t;
        t["target"] = taps[i].target;
        t["negated"] = taps[i].negated;
        t["measured"] = measured;
        if (taps[i].vin) t["vin"] = *taps[i].vin;
        if (taps[i].vref) t["vref"] = *taps[i].vref;
        j["taps"].push_back(t);
        csv << i << ',' << format_double(taps[i].target) << ',' << (taps[i].negated ? 1 : 0)
            << ',' << format_double(measured) << ','
            << (taps[i].vin ? format_double(*taps[i].vin) : "") << ','
            << (taps[i].vref ? format_double(*taps[i].vref) : "") << '\n';
    }
    std::ostream& summary = opts.out.empty() ? std::cerr : std::cout;
    summary << (opts.format == "json" ? j.dump(2) + "\n" : csv.str());
    return 0;
}

// ---- gate -----------------------------------------------------------------

double contract_value(GateKind kind, CorrRegime regime, const std::vector<double>& p) {
    switch (kind) {
        case GateKind::And:
            if (regime == CorrRegime::Uncorrelated) return p[0] * p[1];
            if (regime == CorrRegime::Positive) return std::min(p[0], p[1]);
            return std::max(p[0] + p[1] - 1.0, 0.0);
        case GateKind::Or:
            if (regime == CorrRegime::Uncorrelated) return p[0] + p[1] - p[0] * p[1];
            if (regime == CorrRegime::Positive) return std::max(p[0], p[1]);
            return std::min(1.0, p[0] + p[1]);
        case GateKind::Xor:
            if (regime == CorrRegime::Uncorrelated) return p[0] + p[1] - 2.0 * p[0] * p[1];
            if (regime == CorrRegime::Positive) return std::abs(p[0] - p[1]);
            return p[0] + p[1] <= 1.0 ? p[0] + p[1] : 2.0 - (p[0] + p[1]);
        case GateKind::Not:
            return 1.0 - p[0];
        case GateKind::Mux2:
            return (1.0 - p[0]) * p[1] + p[0] * p[2];
        default:
            throw ValidationError("gate command supports AND, OR, XOR, NOT, MUX2");
    }
}

int cmd_gate(CommonOpts& opts, const std::string& kind_name, const std::string& regime_name,
             const std::vector<double>& targets) {
    std::uint64_t seed = resolve_seed(opts);
    GateKind kind = gate_from_name(kind_name);
    CorrRegime regime = corr_regime_from_name(regime_name);

    std::size_t need = kind == GateKind::Not ? 1 : (kind == GateKind::Mux2 ? 3 : 2);
    if (kind == GateKind::Mux4 || kind == GateKind::Dff || kind == GateKind::Cordiv)
        throw ValidationError("gate command supports AND, OR, XOR, NOT, MUX2");
    if (targets.size() != need)
        throw ValidationError("gate " + kind_name + " needs " + std::to_string(need) +
                              " --p values (MUX2 order: select, data0, data1)");

    StochasticNumber out;
    if (kind == GateKind::Not) {
        SneUnit u("a", make_taps({{targets[0], false}}), opts.latent_mode(),
                  derive_seed(seed, 0), opts.params());
        auto a = u.encode(opts.bits)[0];
        out = apply_gate(kind, {&a});
    } else if (kind == GateKind::Mux2) {
        SneUnit us("s", make_taps({{targets[0], false}}), opts.latent_mode(),
                   derive_seed(seed, 0), opts.params());
        auto s = us.encode(opts.bits)[0];
        auto [a, b] = correlated_pair(targets[1], targets[2], regime, opts.bits,
                                      derive_seed(seed, 1), opts.latent_mode());
        out = apply_gate(kind, {&s, &a, &b});
    } else {
        auto [a, b] = correlated_pair(targets[0], targets[1], regime, opts.bits,
                                      derive_seed(seed, 0), opts.latent_mode());
        out = apply_gate(kind, {&a, &b});
    }

    double expected = contract_value(kind, regime, targets);
    double measured = estimate_probability(out);
    if (opts.format == "json") {
        nlohmann::json j;
        j["gate"] = kind_name;
        j["regime"] = regime_name;
        j["targets"] = targets;
        j["bits"] = opts.bits;
        j["seed"] = seed;
        j["expected"] = expected;
        j["measured"] = measured;
        j["error"] = measured - expected;
        j["stream"] = out.to_string();
        write_output(opts, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "gate,regime,bits,seed,expected,measured,error\n"
            << kind_name << ',' << regime_name << ',' << opts.bits << ',' << seed << ','
            << format_double(expected) << ',' << format_double(measured) << ','
            << format_double(measured - expected) << '\n';
        write_output(opts, csv.str());
    }
    return 0;
}

// ---- infer / fuse ----------------------------------------------------------

int emit_decision(const CommonOpts& opts, const DecisionReport& report) {
    if (opts.format == "json")
        write_output(opts, report.to_json() + "\n");
    else
        write_output(opts, DecisionReport::csv_header() + "\n" + report.to_csv_row() + "\n");
    return report_warnings(report.warnings);
}

int cmd_infer(CommonOpts& opts, double prior, double lik, double likneg) {
    std::uint64_t seed = resolve_seed(opts);
    auto report = infer({prior, lik, likneg}, opts.bits, seed, opts.latent_mode(),
                        opts.params());
    return emit_decision(opts, report);
}

int cmd_fuse(CommonOpts& opts, const std::vector<double>& modal, double prior) {
    std::uint64_t seed = resolve_seed(opts);
    auto report = fuse({modal, prior}, opts.bits, seed, opts.latent_mode(), opts.params());
    return emit_decision(opts, report);
}

// ---- fuse-batch -------------------------------------------------------------

int cmd_fuse_batch(CommonOpts& opts, const std::string& input, double threshold) {
    std::uint64_t seed = resolve_seed(opts);
    std::ifstream in(input);
    if (!in) throw ValidationError("cannot open input file: " + input);
    auto records = read_detections_csv(in, input);
    auto report = fuse_batch(records, opts.bits, seed, opts.latent_mode(), threshold,
                             opts.params());
    if (opts.out.empty()) {
        std::cout << (opts.format == "json" ? report.to_json() + "\n" : report.to_csv());
    } else {
        write_file(opts.out + ".csv", report.to_csv());
        write_file(opts.out + ".json", report.to_json() + "\n");
        std::cerr << "wrote " << opts.out << ".csv and " << opts.out << ".json\n";
    }
    return 0;
}

// ---- compile / run ----------------------------------------------------------

int cmd_compile(CommonOpts& opts, const std::string& input) {
    auto spec = parse_network(read_file(input), input);
    auto plan = compile_network(spec);
    write_output(opts, emit_plan(plan));
    return 0;
}

int cmd_run(CommonOpts& opts, const std::string& input) {
    std::uint64_t seed = resolve_seed(opts);
    auto plan = load_plan(read_file(input), input);
    auto run = run_netlist(plan.netlist, opts.bits, seed, opts.latent_mode(), opts.params());

    if (opts.format == "json") {
        nlohmann::json j;
        j["netlist"] = input;
        j["bits"] = opts.bits;
        j["seed"] = seed;
        j["mode"] = opts.mode;
        j["simulated_latency_s"] = run.simulated_latency;
        if (run.energy > 0.0) j["energy_j"] = run.energy;
        for (const auto& [name, p] : run.sink_probabilities) j["sinks"][name] = p;
        nlohmann::json corr = nlohmann::json::array();
        for (const auto& e : run.correlations) {
            nlohmann::json c;
            c["a"] = e.a;
            c["b"] = e.b;
            c["rho"] = e.rho ? nlohmann::json(*e.rho) : nlohmann::json(nullptr);
            c["scc"] = e.scc ? nlohmann::json(*e.scc) : nlohmann::json(nullptr);
            c["required"] = corr_regime_name(*e.required);
            c["violated"] = e.violated;
            corr.push_back(std::move(c));
        }
        j["correlations"] = std::move(corr);
        nlohmann::json warns = nlohmann::json::array();
        for (const auto& w : run.warnings)
            warns.push_back(
                {{"where", w.where}, {"message", w.message}, {"measured", w.measured}});
        j["warnings"] = std::move(warns);
        write_output(opts, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "sink,probability\n";
        for (const auto& [name, p] : run.sink_probabilities)
            csv << name << ',' << format_double(p) << '\n';
        write_output(opts, csv.str());
    }
    return report_warnings(run.warnings);
}

// ---- device-stats / repro ----------------------------------------------------

int cmd_device_stats(CommonOpts& opts) {
    std::uint64_t seed = resolve_seed(opts);
    auto report = run_repro("device-stats", seed);
    write_output(opts, opts.format == "csv" ? report.to_csv() : report.to_text());
    return report.all_pass() ? 0 : 1;
}

int cmd_repro(CommonOpts& opts, const std::string& example) {
    std::uint64_t seed = resolve_seed(opts);
    auto report = run_repro(example, seed);
    std::cout << report.to_text();
    if (!opts.out.empty()) {
        write_file(opts.out, report.to_csv());
        for (const auto& [name, content] : report.artifacts) {
            auto slash = opts.out.find_last_of('/');
            std::string dir = slash == std::string::npos ? "" : opts.out.substr(0, slash + 1);
            write_file(dir + name, content);
        }
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memristor stochastic-computing simulator with Bayesian operators"};
    app.require_subcommand(1);

    CommonOpts opts;

    std::vector<double> enc_targets;
    std::vector<std::size_t> enc_negate;
    auto* enc = app.add_subcommand("encode", "emit stochastic streams at target probabilities");
    add_common(enc, opts);
    enc->add_option("--p", enc_targets, "tap target probability (repeatable)")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    enc->add_option("--negate", enc_negate, "tap index produced through an inverter");

    std::string gate_kind = "AND", gate_regime = "uncorrelated";
    std::vector<double> gate_targets;
    auto* gate = app.add_subcommand("gate", "evaluate one probabilistic gate contract");
    add_common(gate, opts);
    gate->add_option("--kind", gate_kind, "AND, OR, XOR, NOT, or MUX2")->required();
    gate->add_option("--regime", gate_regime, "uncorrelated, positive, or negative");
    gate->add_option("--p", gate_targets, "input probabilities (MUX2: select, data0, data1)")
        ->required()
        ->check(CLI::Range(0.0, 1.0));

    double inf_prior = 0.5, inf_lik = 0.5, inf_likneg = 0.5;
    auto* inf = app.add_subcommand("infer", "posterior of one hypothesis given one observation");
    add_common(inf, opts);
    inf->add_option("--prior", inf_prior, "prior P(A)")->required()->check(CLI::Range(0.0, 1.0));
    inf->add_option("--lik", inf_lik, "likelihood P(B|A)")->required()->check(CLI::Range(0.0, 1.0));
    inf->add_option("--likneg", inf_likneg, "likelihood P(B|!A)")
        ->required()
        ->check(CLI::Range(0.0, 1.0));

    std::vector<double> fuse_modal;
    double fuse_prior = 0.5;
    auto* fus = app.add_subcommand("fuse", "fuse per-modality posteriors into one decision");
    add_common(fus, opts);
    fus->add_option("--p", fuse_modal, "modal posterior (repeat, two or more)")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    fus->add_option("--prior", fuse_prior, "shared prior")->check(CLI::Range(0.0, 1.0));

    std::string batch_in;
    double batch_threshold = 0.5;
    auto* batch = app.add_subcommand("fuse-batch", "fuse per-object detection confidences");
    add_common(batch, opts);
    batch->add_option("--in", batch_in, "detection CSV (frame_id,modality,object_id,confidence)")
        ->required();
    batch->add_option("--threshold", batch_threshold, "detection threshold")
        ->check(CLI::Range(0.0, 1.0));

    std::string compile_in;
    auto* comp = app.add_subcommand("compile", "compile a .bnet network into a netlist");
    add_common(comp, opts);
    comp->add_option("--in", compile_in, "network description (.bnet)")->required();

    std::string run_in;
    auto* runc = app.add_subcommand("run", "execute a netlist and report sinks/correlations");
    add_common(runc, opts);
    runc->add_option("--in", run_in, "netlist file (.snet)")->required();

    auto* dev = app.add_subcommand("device-stats", "device sampling statistics report");
    add_common(dev, opts);

    std::string repro_example;
    auto* rep = app.add_subcommand("repro", "run a named reproduction scenario");
    add_common(rep, opts);
    rep->add_option("--example", repro_example, "scenario name")
        ->required()
        ->check(CLI::IsMember(repro_scenarios()));

    CLI11_PARSE(app, argc, argv);

    try {
        if (enc->parsed()) return cmd_encode(opts, enc_targets, enc_negate);
        if (gate->parsed()) return cmd_gate(opts, gate_kind, gate_regime, gate_targets);
        if (inf->parsed()) return cmd_infer(opts, inf_prior, inf_lik, inf_likneg);
        if (fus->parsed()) return cmd_fuse(opts, fuse_modal, fuse_prior);
        if (batch->parsed()) return cmd_fuse_batch(opts, batch_in, batch_threshold);
        if (comp->parsed()) return cmd_compile(opts, compile_in);
        if (runc->parsed()) return cmd_run(opts, run_in);
        if (dev->parsed()) return cmd_device_stats(opts);
        if (rep->parsed()) return cmd_repro(opts, repro_example);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
