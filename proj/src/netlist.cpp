#include "scsim/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

#include "scsim/device.hpp"

namespace scsim {

std::string corr_regime_name(CorrRegime r) {
    switch (r) {
        case CorrRegime::Uncorrelated: return "uncorrelated";
        case CorrRegime::Positive: return "positive";
        case CorrRegime::Negative: return "negative";
    }
    return "?";
}

CorrRegime corr_regime_from_name(const std::string& name) {
    if (name == "uncorrelated") return CorrRegime::Uncorrelated;
    if (name == "positive") return CorrRegime::Positive;
    if (name == "negative") return CorrRegime::Negative;
    throw ValidationError("unknown correlation regime `" + name + "`");
}

std::string format_double(double value) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

void CircuitNetlist::validate() const {
    std::set<std::string> ids;
    for (const auto& s : sources) {
        if (!ids.insert(s.stream_id).second)
            throw NetlistInvalidError("duplicate id `" + s.stream_id + "`");
        if (!(s.p >= 0.0 && s.p <= 1.0))
            throw NetlistInvalidError("source `" + s.stream_id + "` probability outside [0,1]");
    }
    for (const auto& n : nodes) {
        if (!ids.insert(n.id).second)
            throw NetlistInvalidError("duplicate id `" + n.id + "`");
        if (static_cast<int>(n.inputs.size()) != gate_arity(n.kind))
            throw NetlistInvalidError("node `" + n.id + "`: " + gate_name(n.kind) +
                                      " expects " + std::to_string(gate_arity(n.kind)) +
                                      " inputs, got " + std::to_string(n.inputs.size()));
    }
    for (const auto& n : nodes)
        for (const auto& in : n.inputs)
            if (!ids.count(in))
                throw NetlistInvalidError("node `" + n.id + "` references unknown id `" + in + "`");
    for (const auto& [name, target] : sinks)
        if (!ids.count(target))
            throw NetlistInvalidError("sink `" + name + "` references unknown id `" + target + "`");
    for (const auto& ann : annotations)
        for (const std::string& id : {ann.a, ann.b})
            if (!ids.count(id))
                throw NetlistInvalidError("correlation annotation references unknown id `" + id + "`");

    // Combinational cycle check. DFF outputs are available at cycle start, so
    // edges into a DFF do not constrain in-cycle ordering.
    std::unordered_map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i) node_index[nodes[i].id] = i;

    std::vector<int> indegree(nodes.size(), 0);
    std::vector<std::vector<std::size_t>> consumers(nodes.size());
    std::size_t combinational = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (nodes[j].kind == GateKind::Dff) continue;
        ++combinational;
        for (const auto& in : nodes[j].inputs) {
            auto it = node_index.find(in);
            if (it == node_index.end()) continue;               // source stream
            if (nodes[it->second].kind == GateKind::Dff) continue;  // register output
            ++indegree[j];
            consumers[it->second].push_back(j);
        }
    }
    std::deque<std::size_t> ready;
    for (std::size_t j = 0; j < nodes.size(); ++j)
        if (nodes[j].kind != GateKind::Dff && indegree[j] == 0) ready.push_back(j);
    std::size_t sorted = 0;
    while (!ready.empty()) {
        std::size_t j = ready.front();
        ready.pop_front();
        ++sorted;
        for (std::size_t k : consumers[j])
            if (--indegree[k] == 0) ready.push_back(k);
    }
    if (sorted != combinational) {
        std::string cyc;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (nodes[j].kind != GateKind::Dff && indegree[j] > 0)
                cyc += (cyc.empty() ? "" : ", ") + nodes[j].id;
        throw NetlistInvalidError("combinational cycle through: " + cyc);
    }
}

namespace {

struct DividerPattern {
    bool is_divider = false;
    std::string num_id;
    std::string den_id;
};

// A MUX2 whose 0-leg is a DFF fed by the MUX itself is the correlated-divider
// composition; its select is a denominator, not an ordinary select.
DividerPattern classify_mux(const CircuitNetlist& netlist, const GateNode& node) {
    DividerPattern p;
    if (node.kind == GateKind::Cordiv) {
        p.is_divider = true;
        p.num_id = node.inputs[0];
        p.den_id = node.inputs[1];
        return p;
    }
    if (node.kind != GateKind::Mux2) return p;
    for (const auto& other : netlist.nodes) {
        if (other.kind == GateKind::Dff && other.id == node.inputs[1] &&
            other.inputs[0] == node.id) {
            p.is_divider = true;
            p.num_id = node.inputs[2];
            p.den_id = node.inputs[0];
            return p;
        }
    }
    return p;
}

std::optional<double> try_scc(const StochasticNumber& a, const StochasticNumber& b) {
    try {
        return scc(a, b);
    } catch (const UndefinedCorrelationError&) {
        return std::nullopt;
    }
}

std::optional<double> try_pearson(const StochasticNumber& a, const StochasticNumber& b) {
    try {
        return pearson(a, b);
    } catch (const UndefinedCorrelationError&) {
        return std::nullopt;
    }
}

}  // namespace

RunReport run_netlist(const CircuitNetlist& netlist, std::size_t length, std::uint64_t seed,
                      LatentMode mode, const MemristorParams& params, const OuParams& ou) {
    netlist.validate();
    if (length == 0) throw ValidationError("run_netlist: length must be >= 1");

    // Dense indices: sources first, then nodes.
    std::unordered_map<std::string, std::size_t> index;
    const std::size_t nsrc = netlist.sources.size();
    for (std::size_t i = 0; i < nsrc; ++i) index[netlist.sources[i].stream_id] = i;
    for (std::size_t j = 0; j < netlist.nodes.size(); ++j)
        index[netlist.nodes[j].id] = nsrc + j;

    // Encoder units, one per distinct sne id in order of first appearance;
    // taps in source order. Unit seeds derive from the master seed.
    std::vector<std::string> sne_order;
    std::unordered_map<std::string, std::vector<std::size_t>> sne_sources;
    for (std::size_t i = 0; i < nsrc; ++i) {
        const auto& s = netlist.sources[i];
        if (!sne_sources.count(s.sne_id)) sne_order.push_back(s.sne_id);
        sne_sources[s.sne_id].push_back(i);
    }
    std::vector<SneUnit> units;
    std::vector<std::vector<std::size_t>> unit_targets;  // dense source slots per unit
    units.reserve(sne_order.size());
    for (std::size_t u = 0; u < sne_order.size(); ++u) {
        std::vector<std::pair<double, bool>> targets;
        for (std::size_t i : sne_sources[sne_order[u]])
            targets.emplace_back(netlist.sources[i].p, netlist.sources[i].negated);
        units.emplace_back(sne_order[u], make_taps(targets), mode,
                           derive_seed(seed, u), params, ou);
        unit_targets.push_back(sne_sources[sne_order[u]]);
    }

    // Topological order of combinational nodes (DFFs publish at cycle start).
    std::vector<int> indegree(netlist.nodes.size(), 0);
    std::vector<std::vector<std::size_t>> consumers(netlist.nodes.size());
    for (std::size_t j = 0; j < netlist.nodes.size(); ++j) {
        if (netlist.nodes[j].kind == GateKind::Dff) continue;
        for (const auto& in : netlist.nodes[j].inputs) {
            std::size_t k = index[in];
            if (k < nsrc) continue;
            if (netlist.nodes[k - nsrc].kind == GateKind::Dff) continue;
            ++indegree[j];
            consumers[k - nsrc].push_back(j);
        }
    }
    std::vector<std::size_t> topo;
    std::deque<std::size_t> ready;
    for (std::size_t j = 0; j < netlist.nodes.size(); ++j)
        if (netlist.nodes[j].kind != GateKind::Dff && indegree[j] == 0) ready.push_back(j);
    while (!ready.empty()) {
        std::size_t j = ready.front();
        ready.pop_front();
        topo.push_back(j);
        for (std::size_t k : consumers[j])
            if (--indegree[k] == 0) ready.push_back(k);
    }
    std::vector<std::size_t> dffs;
    for (std::size_t j = 0; j < netlist.nodes.size(); ++j)
        if (netlist.nodes[j].kind == GateKind::Dff) dffs.push_back(j);

    // Pre-resolved input slots.
    std::vector<std::vector<std::size_t>> node_inputs(netlist.nodes.size());
    for (std::size_t j = 0; j < netlist.nodes.size(); ++j)
        for (const auto& in : netlist.nodes[j].inputs)
            node_inputs[j].push_back(index[in]);

    const std::size_t total = nsrc + netlist.nodes.size();
    std::vector<StochasticNumber> traces(total, StochasticNumber(length));
    std::vector<char> value(total, 0);
    std::vector<GateState> states(netlist.nodes.size());
    std::vector<bool> tap_bits;
    bool in_bits[6];

    for (std::size_t cycle = 0; cycle < length; ++cycle) {
        for (std::size_t u = 0; u < units.size(); ++u) {
            units[u].step(tap_bits);
            for (std::size_t t = 0; t < tap_bits.size(); ++t)
                value[unit_targets[u][t]] = tap_bits[t];
        }
        for (std::size_t j : dffs) value[nsrc + j] = states[j].q;
        for (std::size_t j : topo) {
            const auto& ins = node_inputs[j];
            for (std::size_t k = 0; k < ins.size(); ++k) in_bits[k] = value[ins[k]];
            value[nsrc + j] = eval_gate_step(netlist.nodes[j].kind,
                                             std::span<const bool>(in_bits, ins.size()),
                                             states[j]);
        }
        for (std::size_t j : dffs) states[j].q = value[node_inputs[j][0]];
        for (std::size_t k = 0; k < total; ++k)
            if (value[k]) traces[k].set_bit(cycle, true);
    }

    RunReport report;
    for (const auto& [id, k] : index) report.streams[id] = traces[k];
    for (const auto& [name, target] : netlist.sinks)
        report.sink_probabilities[name] = estimate_probability(report.streams.at(target));

    const double n = static_cast<double>(length);
    const double uncorr_threshold = std::max(0.05, 4.0 / std::sqrt(n));
    for (const auto& ann : netlist.annotations) {
        CorrelationEntry entry;
        entry.a = ann.a;
        entry.b = ann.b;
        entry.required = ann.regime;
        const auto& sa = report.streams.at(ann.a);
        const auto& sb = report.streams.at(ann.b);
        entry.rho = try_pearson(sa, sb);
        entry.scc = try_scc(sa, sb);
        if (entry.scc) {
            switch (ann.regime) {
                case CorrRegime::Uncorrelated:
                    entry.violated = std::abs(*entry.scc) > uncorr_threshold;
                    break;
                case CorrRegime::Positive:
                    entry.violated = *entry.scc < 0.8;
                    break;
                case CorrRegime::Negative:
                    entry.violated = *entry.scc > -0.8;
                    break;
            }
        }
        if (entry.violated)
            report.warnings.push_back({ann.a + "/" + ann.b,
                                       "annotated " + corr_regime_name(ann.regime) +
                                           " pair violates its regime",
                                       entry.scc.value_or(0.0)});
        report.correlations.push_back(std::move(entry));
    }

    // Statistical preconditions of MUX selects and divider operands.
    for (const auto& node : netlist.nodes) {
        if (node.kind != GateKind::Mux2 && node.kind != GateKind::Mux4 &&
            node.kind != GateKind::Cordiv)
            continue;
        auto divider = classify_mux(netlist, node);
        if (divider.is_divider) {
            const auto& num = report.streams.at(divider.num_id);
            const auto& den = report.streams.at(divider.den_id);
            if (den.ones() == 0) {
                report.warnings.push_back({node.id, "divider denominator is all zero", 0.0});
                continue;
            }
            double pn = estimate_probability(num);
            double pd = estimate_probability(den);
            if (pn > pd + 3.0 * std::sqrt(0.25 / n))
                report.warnings.push_back(
                    {node.id, "divider numerator probability exceeds denominator", pn - pd});
            auto s = try_scc(num, den);
            if (s && *s < 0.8)
                report.warnings.push_back(
                    {node.id, "divider operands not positively correlated", *s});
            continue;
        }
        std::size_t nselects = node.kind == GateKind::Mux4 ? 2 : 1;
        for (std::size_t si = 0; si < nselects; ++si) {
            const auto& sel = report.streams.at(node.inputs[si]);
            for (std::size_t di = nselects; di < node.inputs.size(); ++di) {
                auto s = try_scc(sel, report.streams.at(node.inputs[di]));
                if (s && std::abs(*s) > uncorr_threshold)
                    report.warnings.push_back(
                        {node.id, "mux select correlated with data input `" +
                                      node.inputs[di] + "`", *s});
            }
        }
    }

    report.simulated_latency = frame_latency(length, params);
    if (mode == LatentMode::DeviceBacked)
        for (const auto& unit : units)
            report.energy += unit.device().state().energy_accumulated;
    return report;
}

std::string emit_netlist(const CircuitNetlist& netlist) {
    std::ostringstream os;
    for (const auto& s : netlist.sources) {
        os << "source " << s.stream_id << ' ' << s.sne_id << ' ' << format_double(s.p);
        if (s.negated) os << " neg";
        os << '\n';
    }
    for (const auto& nd : netlist.nodes) {
        os << nd.id << ' ' << gate_name(nd.kind);
        for (const auto& in : nd.inputs) os << ' ' << in;
        os << '\n';
    }
    for (const auto& [name, target] : netlist.sinks)
        os << "sink " << name << ' ' << target << '\n';
    for (const auto& ann : netlist.annotations)
        os << "corr " << ann.a << ' ' << ann.b << ' ' << corr_regime_name(ann.regime) << '\n';
    return os.str();
}

CircuitNetlist load_netlist(const std::string& text, const std::string& filename) {
    CircuitNetlist netlist;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;

        auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError(filename, lineno, 1, msg);
        };

        if (tok[0] == "source") {
            if (tok.size() != 4 && !(tok.size() == 5 && tok[4] == "neg"))
                throw fail("expected `source <stream_id> <sne_id> <p> [neg]`");
            SourceBinding s;
            s.stream_id = tok[1];
            s.sne_id = tok[2];
            char* end = nullptr;
            s.p = std::strtod(tok[3].c_str(), &end);
            if (end == tok[3].c_str() || *end != '\0')
                throw fail("bad probability literal `" + tok[3] + "`");
            if (!(s.p >= 0.0 && s.p <= 1.0))
                throw fail("probability `" + tok[3] + "` outside [0,1]");
            s.negated = tok.size() == 5;
            netlist.sources.push_back(std::move(s));
        } else if (tok[0] == "sink") {
            if (tok.size() != 3) throw fail("expected `sink <name> <id>`");
            netlist.sinks.emplace_back(tok[1], tok[2]);
        } else if (tok[0] == "corr") {
            if (tok.size() != 4) throw fail("expected `corr <a> <b> <regime>`");
            CorrAnnotation ann;
            ann.a = tok[1];
            ann.b = tok[2];
            try {
                ann.regime = corr_regime_from_name(tok[3]);
            } catch (const ValidationError& e) {
                throw fail(e.what());
            }
            netlist.annotations.push_back(std::move(ann));
        } else {
            if (tok.size() < 2) throw fail("expected `<id> <KIND> <inputs>...`");
            GateNode node;
            node.id = tok[0];
            try {
                node.kind = gate_from_name(tok[1]);
            } catch (const ValidationError& e) {
                throw fail(e.what());
            }
            node.inputs.assign(tok.begin() + 2, tok.end());
            if (static_cast<int>(node.inputs.size()) != gate_arity(node.kind))
                throw fail("node `" + node.id + "`: " + gate_name(node.kind) + " expects " +
                           std::to_string(gate_arity(node.kind)) + " inputs");
            netlist.nodes.push_back(std::move(node));
        }
    }
    try {
        netlist.validate();
    } catch (const NetlistInvalidError& e) {
        throw ParseError(filename, lineno, 1, e.what());
    }
    return netlist;
}

}  // namespace scsim
