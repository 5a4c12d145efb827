#include "scsim/bayes.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace scsim {

namespace {

void check_probability(double p, const std::string& name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError(name + " outside [0,1]: " + format_double(p));
}

/// Pairwise regime annotations implied by the source table: taps of one
/// encoder are positively (or, across a negation, negatively) correlated;
/// taps of distinct encoders are uncorrelated.
void annotate_sources(CircuitNetlist& netlist) {
    const auto& src = netlist.sources;
    for (std::size_t i = 0; i < src.size(); ++i) {
        for (std::size_t j = i + 1; j < src.size(); ++j) {
            CorrAnnotation ann;
            ann.a = src[i].stream_id;
            ann.b = src[j].stream_id;
            if (src[i].sne_id != src[j].sne_id)
                ann.regime = CorrRegime::Uncorrelated;
            else
                ann.regime = src[i].negated == src[j].negated ? CorrRegime::Positive
                                                              : CorrRegime::Negative;
            netlist.annotations.push_back(std::move(ann));
        }
    }
}

/// Appends the correlated-divider composition (mux + flip-flop) computing
/// num_id / den_id into node `q`, with the structural annotation.
void append_divider(CircuitNetlist& netlist, const std::string& num_id,
                    const std::string& den_id) {
    netlist.nodes.push_back({"q", GateKind::Mux2, {den_id, "qd", num_id}});
    netlist.nodes.push_back({"qd", GateKind::Dff, {"q"}});
    netlist.annotations.push_back({num_id, den_id, CorrRegime::Positive});
}

std::vector<CorrelationEntry> pairwise_matrix(const RunReport& run,
                                              const std::vector<std::string>& keys) {
    std::vector<CorrelationEntry> matrix;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        for (std::size_t j = i + 1; j < keys.size(); ++j) {
            CorrelationEntry e;
            e.a = keys[i];
            e.b = keys[j];
            const auto& sa = run.streams.at(keys[i]);
            const auto& sb = run.streams.at(keys[j]);
            try {
                e.rho = pearson(sa, sb);
            } catch (const UndefinedCorrelationError&) {
            }
            try {
                e.scc = scc(sa, sb);
            } catch (const UndefinedCorrelationError&) {
            }
            matrix.push_back(std::move(e));
        }
    }
    return matrix;
}

}  // namespace

void InferenceInstance::validate() const {
    check_probability(prior, "prior");
    check_probability(likelihood, "likelihood");
    check_probability(likelihood_neg, "likelihood_neg");
}

double InferenceInstance::denominator() const {
    return prior * likelihood + (1.0 - prior) * likelihood_neg;
}

double InferenceInstance::analytic() const {
    double den = denominator();
    if (den <= 0.0)
        throw DivisionUndefinedError("inference denominator is zero");
    return prior * likelihood / den;
}

void FusionInstance::validate() const {
    if (modal_posteriors.size() < 2)
        throw ValidationError("fusion needs at least two modalities");
    for (double p : modal_posteriors) check_probability(p, "modal posterior");
    if (!(prior > 0.0 && prior < 1.0))
        throw ValidationError("fusion prior must lie strictly in (0,1)");
}

double FusionInstance::analytic() const {
    // Scale both hypotheses by prior^(M-1) (1-prior)^(M-1) so each side is a
    // plain product of probabilities; the ratio is unchanged.
    double target = 1.0;
    double complement = 1.0;
    for (double p : modal_posteriors) {
        target *= p;
        complement *= 1.0 - p;
    }
    for (std::size_t i = 1; i < modal_posteriors.size(); ++i) {
        target *= 1.0 - prior;
        complement *= prior;
    }
    if (target + complement <= 0.0)
        throw DegenerateFusionError("both fusion hypotheses have zero mass");
    return target / (target + complement);
}

CircuitNetlist build_inference_netlist(const std::string& parent, const std::string& child,
                                       double prior, double likelihood,
                                       double likelihood_neg, bool with_posterior) {
    const std::string lik = child + "|" + parent;
    const std::string likneg = child + "|!" + parent;
    CircuitNetlist netlist;
    netlist.sources.push_back({parent, "sne_" + parent, prior, false});
    netlist.sources.push_back({lik, "sne_" + child, likelihood, false});
    netlist.sources.push_back({likneg, "sne_" + child, likelihood_neg, false});
    netlist.nodes.push_back({"den", GateKind::Mux2, {parent, likneg, lik}});
    netlist.sinks.emplace_back("P(" + child + ")", "den");
    annotate_sources(netlist);
    if (with_posterior) {
        netlist.nodes.insert(netlist.nodes.begin(),
                             GateNode{"num", GateKind::And, {parent, lik}});
        append_divider(netlist, "num", "den");
        netlist.sinks.emplace_back("P(" + parent + "|" + child + ")", "q");
    }
    return netlist;
}

CircuitNetlist build_fusion_netlist(const std::vector<double>& modal_posteriors,
                                    double prior) {
    CircuitNetlist netlist;
    const std::size_t m = modal_posteriors.size();
    std::vector<std::string> pos_ids, neg_ids;

    for (std::size_t i = 0; i < m; ++i) {
        std::string id = "m" + std::to_string(i + 1);
        netlist.sources.push_back({id, "sne_" + id, modal_posteriors[i], false});
        pos_ids.push_back(id);
    }
    // Prior weighting: each of the M-1 weight streams multiplies (1 - prior)
    // into the target product and prior into the complement product. With a
    // uniform prior both factors are 1/2 and the streams are unnecessary.
    if (prior != 0.5) {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            std::string id = "w" + std::to_string(i + 1);
            netlist.sources.push_back({id, "sne_" + id, 1.0 - prior, false});
            pos_ids.push_back(id);
        }
    }
    for (const auto& id : pos_ids) {
        netlist.nodes.push_back({"n_" + id, GateKind::Not, {id}});
        neg_ids.push_back("n_" + id);
    }

    auto chain = [&netlist](const std::vector<std::string>& ids, const std::string& prefix) {
        std::string acc = ids[0];
        for (std::size_t i = 1; i < ids.size(); ++i) {
            std::string node_id =
                i + 1 == ids.size() ? prefix : prefix + std::to_string(i + 1);
            netlist.nodes.push_back({node_id, GateKind::And, {acc, ids[i]}});
            acc = node_id;
        }
        return acc;
    };
    std::string num = chain(pos_ids, "num");
    std::string comp = chain(neg_ids, "comp");

    // The two product streams are disjoint positionwise, so the OR output
    // carries their probability sum and contains every numerator 1-bit.
    netlist.nodes.push_back({"den", GateKind::Or, {num, comp}});
    annotate_sources(netlist);
    append_divider(netlist, num, "den");
    netlist.sinks.emplace_back("posterior", "q");
    return netlist;
}

CircuitNetlist build_two_parent_netlist(const std::string& parent1, const std::string& parent2,
                                        const std::string& child, double prior1, double prior2,
                                        const std::array<double, 4>& child_table,
                                        std::optional<int> posterior_parent) {
    CircuitNetlist netlist;
    auto table_id = [&](int a1, int a2) {
        return child + "|" + (a1 ? "" : "!") + parent1 + "," + (a2 ? "" : "!") + parent2;
    };
    netlist.sources.push_back({parent1, "sne_" + parent1, prior1, false});
    netlist.sources.push_back({parent2, "sne_" + parent2, prior2, false});
    for (int idx = 0; idx < 4; ++idx)
        netlist.sources.push_back(
            {table_id(idx >> 1, idx & 1), "sne_" + child, child_table[idx], false});

    netlist.nodes.push_back({"den", GateKind::Mux4,
                             {parent1, parent2, table_id(0, 0), table_id(0, 1),
                              table_id(1, 0), table_id(1, 1)}});
    netlist.sinks.emplace_back("P(" + child + ")", "den");
    annotate_sources(netlist);

    if (posterior_parent) {
        // P(parent_k | child): numerator = parent_k AND (child likelihood given
        // parent_k marginalized over the other parent). The numerator's table
        // taps are the same streams the MUX4 routes, so every numerator 1-bit
        // reappears in the denominator.
        const bool first = *posterior_parent == 0;
        const std::string& qp = first ? parent1 : parent2;
        const std::string& other = first ? parent2 : parent1;
        std::string d0 = first ? table_id(1, 0) : table_id(0, 1);
        std::string d1 = table_id(1, 1);
        netlist.nodes.push_back({"lik", GateKind::Mux2, {other, d0, d1}});
        netlist.nodes.push_back({"num", GateKind::And, {qp, "lik"}});
        append_divider(netlist, "num", "den");
        netlist.sinks.emplace_back("P(" + qp + "|" + child + ")", "q");
    }
    return netlist;
}

CircuitNetlist build_children_netlist(const std::string& parent, const std::string& child1,
                                      const std::string& child2, double prior,
                                      const std::array<double, 2>& child1_table,
                                      const std::array<double, 2>& child2_table,
                                      std::optional<int> posterior_child) {
    CircuitNetlist netlist;
    netlist.sources.push_back({parent, "sne_" + parent, prior, false});
    const std::array<std::string, 2> child = {child1, child2};
    const std::array<const std::array<double, 2>*, 2> table = {&child1_table, &child2_table};
    for (int c = 0; c < 2; ++c) {
        netlist.sources.push_back(
            {child[c] + "|!" + parent, "sne_" + child[c], (*table[c])[0], false});
        netlist.sources.push_back(
            {child[c] + "|" + parent, "sne_" + child[c], (*table[c])[1], false});
        netlist.nodes.push_back({"marg" + std::to_string(c + 1), GateKind::Mux2,
                                 {parent, child[c] + "|!" + parent, child[c] + "|" + parent}});
        netlist.sinks.emplace_back("P(" + child[c] + ")", "marg" + std::to_string(c + 1));
    }
    annotate_sources(netlist);
    if (posterior_child) {
        int c = *posterior_child;
        std::string den = "marg" + std::to_string(c + 1);
        netlist.nodes.push_back(
            {"num", GateKind::And, {parent, child[c] + "|" + parent}});
        append_divider(netlist, "num", den);
        netlist.sinks.emplace_back("P(" + parent + "|" + child[c] + ")", "q");
    }
    return netlist;
}

DecisionReport infer(const InferenceInstance& inst, std::size_t bits, std::uint64_t seed,
                     LatentMode mode, const MemristorParams& params, const OuParams& ou) {
    inst.validate();
    double exact = inst.analytic();  // throws on a zero denominator

    auto netlist =
        build_inference_netlist("A", "B", inst.prior, inst.likelihood, inst.likelihood_neg);
    auto run = run_netlist(netlist, bits, seed, mode, params, ou);

    DecisionReport report;
    report.kind = "inference";
    report.instance = {{"prior", inst.prior},
                       {"likelihood", inst.likelihood},
                       {"likelihood_neg", inst.likelihood_neg}};
    report.analytic = exact;
    report.posterior = run.sink_probabilities.at("P(A|B)");
    report.bits = bits;
    report.seed = seed;
    report.simulated_latency = run.simulated_latency;
    report.stream = run.streams.at("q");
    report.correlations =
        pairwise_matrix(run, {"A", "B|A", "B|!A", "num", "den", "q"});
    report.warnings = run.warnings;
    return report;
}

DecisionReport fuse(const FusionInstance& inst, std::size_t bits, std::uint64_t seed,
                    LatentMode mode, const MemristorParams& params, const OuParams& ou) {
    inst.validate();
    double exact = inst.analytic();  // throws when degenerate

    auto netlist = build_fusion_netlist(inst.modal_posteriors, inst.prior);
    auto run = run_netlist(netlist, bits, seed, mode, params, ou);

    DecisionReport report;
    report.kind = "fusion";
    for (std::size_t i = 0; i < inst.modal_posteriors.size(); ++i)
        report.instance.emplace_back("modal" + std::to_string(i + 1),
                                     inst.modal_posteriors[i]);
    report.instance.emplace_back("prior", inst.prior);
    report.analytic = exact;
    report.posterior = run.sink_probabilities.at("posterior");
    report.bits = bits;
    report.seed = seed;
    report.simulated_latency = run.simulated_latency;
    report.stream = run.streams.at("q");

    std::vector<std::string> keys;
    for (std::size_t i = 0; i < inst.modal_posteriors.size(); ++i)
        keys.push_back("m" + std::to_string(i + 1));
    keys.insert(keys.end(), {"num", "comp", "den", "q"});
    report.correlations = pairwise_matrix(run, keys);
    report.warnings = run.warnings;
    return report;
}

RunReport structure_eval(const OneParentOneChild& t, std::size_t bits, std::uint64_t seed,
                         LatentMode mode) {
    check_probability(t.parent_prior, "parent prior");
    check_probability(t.child_given_parent, "child table entry");
    check_probability(t.child_given_not_parent, "child table entry");
    auto netlist = build_inference_netlist("A", "B", t.parent_prior, t.child_given_parent,
                                           t.child_given_not_parent);
    return run_netlist(netlist, bits, seed, mode);
}

RunReport structure_eval(const TwoParentOneChild& t, std::size_t bits, std::uint64_t seed,
                         LatentMode mode) {
    check_probability(t.parent1_prior, "parent prior");
    check_probability(t.parent2_prior, "parent prior");
    for (double v : t.child_table) check_probability(v, "child table entry");
    auto netlist = build_two_parent_netlist("A1", "A2", "B", t.parent1_prior,
                                            t.parent2_prior, t.child_table);
    return run_netlist(netlist, bits, seed, mode);
}

RunReport structure_eval(const OneParentTwoChild& t, std::size_t bits, std::uint64_t seed,
                         LatentMode mode) {
    check_probability(t.parent_prior, "parent prior");
    for (double v : t.child1_table) check_probability(v, "child table entry");
    for (double v : t.child2_table) check_probability(v, "child table entry");
    auto netlist = build_children_netlist("A", "B1", "B2", t.parent_prior, t.child1_table,
                                          t.child2_table);
    return run_netlist(netlist, bits, seed, mode);
}

namespace {

nlohmann::json correlation_json(const std::vector<CorrelationEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j;
        j["a"] = e.a;
        j["b"] = e.b;
        j["rho"] = e.rho ? nlohmann::json(*e.rho) : nlohmann::json(nullptr);
        j["scc"] = e.scc ? nlohmann::json(*e.scc) : nlohmann::json(nullptr);
        if (e.required) {
            j["required"] = corr_regime_name(*e.required);
            j["violated"] = e.violated;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

std::string DecisionReport::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    for (const auto& [k, v] : instance) j["instance"][k] = v;
    j["analytic"] = analytic;
    j["simulated"] = posterior;
    j["error"] = error();
    j["bits"] = bits;
    j["seed"] = seed;
    j["simulated_latency_s"] = simulated_latency;
    j["correlations"] = correlation_json(correlations);
    nlohmann::json warns = nlohmann::json::array();
    for (const auto& w : warnings)
        warns.push_back({{"where", w.where}, {"message", w.message}, {"measured", w.measured}});
    j["warnings"] = std::move(warns);
    return j.dump(2);
}

std::string DecisionReport::csv_header() {
    return "kind,analytic,simulated,error,bits,seed,simulated_latency_s,instance,"
           "correlations,warnings";
}

std::string DecisionReport::to_csv_row() const {
    std::ostringstream os;
    os << kind << ',' << format_double(analytic) << ',' << format_double(posterior) << ','
       << format_double(error()) << ',' << bits << ',' << seed << ','
       << format_double(simulated_latency) << ',';
    std::string inst;
    for (const auto& [k, v] : instance)
        inst += (inst.empty() ? "" : ";") + k + "=" + format_double(v);
    os << inst << ',';
    std::string corr;
    for (const auto& e : correlations) {
        corr += (corr.empty() ? "" : ";") + e.a + "~" + e.b + "=" +
                (e.rho ? format_double(*e.rho) : "nan") + "/" +
                (e.scc ? format_double(*e.scc) : "nan");
    }
    os << corr << ',';
    std::string warn;
    for (const auto& w : warnings) warn += (warn.empty() ? "" : ";") + w.where + ":" + w.message;
    os << warn;
    return os.str();
}

}  // namespace scsim
