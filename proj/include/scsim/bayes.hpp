#ifndef SCSIM_BAYES_HPP
#define SCSIM_BAYES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scsim/netlist.hpp"

namespace scsim {

/// Inputs of a two-hypothesis inference: prior P(A), likelihood P(B|A) and
/// complement likelihood P(B|~A). The posterior follows
///   P(A|B) = P(A)P(B|A) / (P(A)P(B|A) + P(~A)P(B|~A)).
struct InferenceInstance {
    double prior = 0.5;
    double likelihood = 0.5;
    double likelihood_neg = 0.5;

    void validate() const;
    double denominator() const;  // marginal P(B)
    double analytic() const;     // exact posterior; throws DivisionUndefinedError
};

/// Inputs of a multimodal fusion: per-modality posteriors p(y|x_i) combined
/// under conditional independence with a shared prior p(y),
///   p(y|x_1..x_M) proportional to  prod_i p(y|x_i) / p(y)^(M-1),
/// normalized against the complement hypothesis.
struct FusionInstance {
    std::vector<double> modal_posteriors;
    double prior = 0.5;

    void validate() const;  // M >= 2, probabilities in range, prior in (0,1)
    double analytic() const;  // throws DegenerateFusionError when both sides vanish
};

/// Outcome record of one operator run.
struct DecisionReport {
    std::string kind;  // "inference" or "fusion"
    std::vector<std::pair<std::string, double>> instance;
    double analytic = 0.0;
    double posterior = 0.0;
    std::size_t bits = 0;
    std::uint64_t seed = 0;
    double simulated_latency = 0.0;  // seconds
    StochasticNumber stream;         // the posterior stream
    std::vector<CorrelationEntry> correlations;  // pairwise rho/scc over key nodes
    std::vector<ContractWarning> warnings;

    double error() const { return posterior - analytic; }

    std::string to_json() const;
    static std::string csv_header();
    std::string to_csv_row() const;
};

/// Fixed netlist templates. These are shared with the network compiler so a
/// compiled plan and the canned operator produce identical circuits.
CircuitNetlist build_inference_netlist(const std::string& parent, const std::string& child,
                                       double prior, double likelihood,
                                       double likelihood_neg, bool with_posterior = true);
CircuitNetlist build_fusion_netlist(const std::vector<double>& modal_posteriors,
                                    double prior);
CircuitNetlist build_two_parent_netlist(const std::string& parent1, const std::string& parent2,
                                        const std::string& child, double prior1, double prior2,
                                        const std::array<double, 4>& child_table,
                                        std::optional<int> posterior_parent = std::nullopt);
CircuitNetlist build_children_netlist(const std::string& parent, const std::string& child1,
                                      const std::string& child2, double prior,
                                      const std::array<double, 2>& child1_table,
                                      const std::array<double, 2>& child2_table,
                                      std::optional<int> posterior_child = std::nullopt);

DecisionReport infer(const InferenceInstance& inst, std::size_t bits, std::uint64_t seed,
                     LatentMode mode = LatentMode::Ideal, const MemristorParams& params = {},
                     const OuParams& ou = {});

DecisionReport fuse(const FusionInstance& inst, std::size_t bits, std::uint64_t seed,
                    LatentMode mode = LatentMode::Ideal, const MemristorParams& params = {},
                    const OuParams& ou = {});

/// The three supported dependency structures. Child tables are indexed by
/// parent truth value(s): table[1] = P(child | parent), table[0] with the
/// parent false; the four-entry table uses index parent1*2 + parent2.
struct OneParentOneChild {
    double parent_prior;
    double child_given_parent;
    double child_given_not_parent;
};
struct TwoParentOneChild {
    double parent1_prior;
    double parent2_prior;
    std::array<double, 4> child_table;
};
struct OneParentTwoChild {
    double parent_prior;
    std::array<double, 2> child1_table;
    std::array<double, 2> child2_table;
};

/// Evaluates the structure's marginal(s) (and the posterior for the
/// one-parent-one-child case) on its multiplexer template. Sink names follow
/// the quantity computed: "P(B)", "P(A|B)", "P(B1)", "P(B2)".
RunReport structure_eval(const OneParentOneChild& tables, std::size_t bits, std::uint64_t seed,
                         LatentMode mode = LatentMode::Ideal);
RunReport structure_eval(const TwoParentOneChild& tables, std::size_t bits, std::uint64_t seed,
                         LatentMode mode = LatentMode::Ideal);
RunReport structure_eval(const OneParentTwoChild& tables, std::size_t bits, std::uint64_t seed,
                         LatentMode mode = LatentMode::Ideal);

}  // namespace scsim

#endif
