#ifndef SCSIM_DEVICE_HPP
#define SCSIM_DEVICE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "scsim/random.hpp"

namespace scsim {

/// Behavioral parameters of the volatile threshold-switching memristor.
/// All values are SI: volts, seconds, joules.
struct MemristorParams {
    double vth_mean = 2.08;    // switch-on threshold, mean
    double vth_std = 0.28;     // cycle-to-cycle threshold spread
    double vhold_mean = 0.98;  // minimum sustaining voltage, mean
    double vhold_std = 0.30;
    double t_switch = 50e-9;    // set transition time
    double t_relax = 1100e-9;   // spontaneous reset time
    double e_switch = 0.16e-9;  // energy per switch event
    double on_off_ratio = 1e5;
    double cycle_budget = 4e-6;  // per-bit pulse cycle, covers switch + relax

    void validate() const;

    /// Key-value parameter file: `name = value` lines, '#' comments.
    /// Unknown keys are rejected. Missing keys keep their defaults.
    static MemristorParams from_file(const std::string& path);
    void write(std::ostream& os) const;
};

/// Ornstein-Uhlenbeck drift of the threshold voltage across cycles,
///   dV = theta * (mu - V) dt + sigma dW,
/// with one pulse cycle as the unit time step. Defaults keep the stationary
/// law at the measured threshold statistics: stationary std = sigma/sqrt(2 theta).
struct OuParams {
    double theta = 0.1;  // mean-reversion rate per cycle
    double mu = 2.08;    // asymptotic mean, volts
    double sigma = 0.12521980673998823;  // diffusion, volts per sqrt(cycle)

    double stationary_std() const;
    void validate() const;
};

enum class SamplingMode { IidGaussian, OuProcess };

/// Endurance demonstrated by cycling tests; beyond this we warn, not fail.
inline constexpr std::uint64_t kEnduranceCycles = 1'000'000;

struct MemristorState {
    double current_vth = 0.0;
    std::uint64_t cycle_count = 0;
    std::uint64_t switch_count = 0;
    double energy_accumulated = 0.0;  // kept equal to switch_count * e_switch
    SamplingMode mode = SamplingMode::IidGaussian;
    bool endurance_exceeded = false;
};

/// One volatile memristor. The device holds no conductive state across
/// cycles: each cycle's outcome depends only on that cycle's drive voltage
/// and threshold sample (plus the OU drift state when enabled).
class Memristor {
public:
    Memristor(const MemristorParams& params, const OuParams& ou,
              SamplingMode mode = SamplingMode::IidGaussian);

    /// Draws this cycle's threshold voltage and advances the cycle counter.
    /// IidGaussian: independent N(vth_mean, vth_std^2) draws.
    /// OuProcess: exact one-cycle OU transition from the current threshold.
    /// Samples are not truncated to a physical range.
    double sample_vth(Rng& rng);

    /// True iff the drive voltage exceeds the sampled threshold. A switch
    /// event books e_switch into the energy accumulator.
    bool switch_event(double vin, double vth_sample);

    const MemristorParams& params() const { return params_; }
    const OuParams& ou() const { return ou_; }
    const MemristorState& state() const { return state_; }
    MemristorState& state() { return state_; }

private:
    MemristorParams params_;
    OuParams ou_;
    MemristorState state_;
};

/// Simulated hardware time for a frame of `bit_length` pulse cycles.
/// Accounting runs on integer picoseconds so round budgets produce exact
/// results (100 bits at 4 us/bit -> exactly 0.4 ms).
double frame_latency(std::uint64_t bit_length, const MemristorParams& params);

}  // namespace scsim

#endif
