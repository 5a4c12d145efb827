#ifndef SCSIM_REPRO_HPP
#define SCSIM_REPRO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scsim/netlist.hpp"

namespace scsim {

struct ReproCheck {
    std::string name;
    double expected = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;  // 0 means exact
    bool pass = false;
};

struct ReproReport {
    std::string scenario;
    std::vector<ReproCheck> checks;
    /// Auxiliary outputs (filename -> content), e.g. plot-ready stream dumps.
    std::vector<std::pair<std::string, std::string>> artifacts;

    bool all_pass() const;
    std::string to_text() const;  // aligned pass/fail table
    std::string to_csv() const;
};

/// Scenario names accepted by run_repro.
const std::vector<std::string>& repro_scenarios();

/// Runs one named desk-scale reproduction scenario. Unknown names raise
/// ValidationError.
ReproReport run_repro(const std::string& scenario, std::uint64_t seed);

/// Generates a pair of streams with targets (p, q) under the given mutual
/// regime: distinct encoder units when uncorrelated, one shared unit
/// otherwise (second tap negated for the negative regime).
std::pair<StochasticNumber, StochasticNumber> correlated_pair(
    double p, double q, CorrRegime regime, std::size_t bits, std::uint64_t seed,
    LatentMode mode = LatentMode::Ideal);

}  // namespace scsim

#endif
