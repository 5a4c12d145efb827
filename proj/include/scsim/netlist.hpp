#ifndef SCSIM_NETLIST_HPP
#define SCSIM_NETLIST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scsim/bitstream.hpp"
#include "scsim/encoder.hpp"
#include "scsim/errors.hpp"
#include "scsim/gates.hpp"

namespace scsim {

/// Binds a named input stream to one comparator tap of an encoder unit.
/// Sources sharing an `sne_id` observe one latent per cycle; the targets of a
/// negated source couple anti-comonotonically with its unit siblings.
struct SourceBinding {
    std::string stream_id;
    std::string sne_id;
    double p = 0.5;
    bool negated = false;
};

struct GateNode {
    std::string id;
    GateKind kind = GateKind::And;
    std::vector<std::string> inputs;  // source stream ids or upstream node ids
};

enum class CorrRegime { Uncorrelated, Positive, Negative };

std::string corr_regime_name(CorrRegime r);
CorrRegime corr_regime_from_name(const std::string& name);

/// Post-run verifiable requirement on the correlation between two named
/// streams (sources or node outputs).
struct CorrAnnotation {
    std::string a;
    std::string b;
    CorrRegime regime = CorrRegime::Uncorrelated;
};

/// A directed gate graph over encoder-backed sources. Acyclic except through
/// DFF state elements (a DFF's output is available at cycle start, so its
/// input edge does not constrain evaluation order).
struct CircuitNetlist {
    std::vector<SourceBinding> sources;
    std::vector<GateNode> nodes;
    std::vector<std::pair<std::string, std::string>> sinks;  // name -> stream/node id
    std::vector<CorrAnnotation> annotations;

    /// Checks arity, id uniqueness, dangling references, and combinational
    /// cycles. Throws NetlistInvalidError.
    void validate() const;
};

struct CorrelationEntry {
    std::string a;
    std::string b;
    std::optional<double> rho;  // absent when undefined (constant stream)
    std::optional<double> scc;
    std::optional<CorrRegime> required;
    bool violated = false;
};

struct RunReport {
    std::map<std::string, StochasticNumber> streams;  // every source and node output
    std::map<std::string, double> sink_probabilities;
    std::vector<CorrelationEntry> correlations;  // one per annotation
    std::vector<ContractWarning> warnings;
    double simulated_latency = 0.0;  // seconds of hardware time
    double energy = 0.0;             // joules booked by device-backed encoders
};

/// Cycle-synchronous execution: each cycle every encoder unit draws its
/// latent, combinational nodes evaluate in topological order, and DFFs latch
/// at cycle end. Deterministic for a fixed (netlist, length, seed, mode).
RunReport run_netlist(const CircuitNetlist& netlist, std::size_t length, std::uint64_t seed,
                      LatentMode mode = LatentMode::Ideal,
                      const MemristorParams& params = {}, const OuParams& ou = {});

/// Line-oriented text format (canonical order: sources, nodes, sinks, corr):
///   source <stream_id> <sne_id> <p> [neg]
///   <node_id> <KIND> <input_id>...
///   sink <name> <id>
///   corr <a> <b> uncorrelated|positive|negative
/// '#' starts a comment. emit(load(text)) == text for canonical files.
std::string emit_netlist(const CircuitNetlist& netlist);
CircuitNetlist load_netlist(const std::string& text, const std::string& filename = "<netlist>");

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace scsim

#endif
