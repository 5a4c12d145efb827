#ifndef SCSIM_ENCODER_HPP
#define SCSIM_ENCODER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scsim/bitstream.hpp"
#include "scsim/device.hpp"
#include "scsim/random.hpp"

namespace scsim {

/// Measured voltage-to-probability calibration of the encoder front-end.
/// Rising: P = 1 / (1 + exp(-slope (V - midpoint)))  (drive voltage knob)
/// Falling: P = 1 - 1 / (1 + exp(-slope (V - midpoint)))  (reference knob)
struct SigmoidFit {
    enum class Orientation { Rising, Falling };

    double slope;
    double midpoint;
    Orientation orientation;

    double probability(double volts) const;
    /// Exact inverse. Throws ValidationError for p outside (0, 1): the fit
    /// never reaches 0 or 1 at finite voltage.
    double voltage(double p) const;
};

/// Default calibration: drive-voltage curve, midpoint 2.24 V, slope 3.56 /V.
SigmoidFit input_voltage_fit();
/// Default calibration: comparator-reference curve, midpoint 0.57 V, slope 11.5 /V.
SigmoidFit reference_voltage_fit();

double p_from_vin(double vin);
double vin_from_p(double p);
double p_from_vref(double vref);
double vref_from_p(double p);

enum class LatentMode { Ideal, DeviceBacked };

/// One comparator tap of an encoder. `target` is the probability the emitted
/// stream should carry. A negated tap inverts a comparator set at 1-target,
/// so the stream still measures `target` but couples anti-comonotonically
/// with the unit's non-negated taps.
struct SneTap {
    double target = 0.5;
    bool negated = false;

    /// Hardware knob metadata (not used by the bit generator): drive voltage
    /// for the first tap, comparator reference for the rest. Absent for
    /// degenerate targets 0 and 1, which no finite voltage reaches.
    std::optional<double> vin;
    std::optional<double> vref;
};

/// A stochastic number encoder: one shared stochastic latent per cycle,
/// observed through one or more comparator taps. Taps of one unit are
/// maximally correlated (comonotone, or anti-comonotone when negated);
/// distinct units draw independent latents and are uncorrelated.
class SneUnit {
public:
    SneUnit(std::string id, std::vector<SneTap> taps, LatentMode mode, std::uint64_t seed,
            const MemristorParams& params = {}, const OuParams& ou = {});

    /// Advances one cycle: draws the unit's shared latent and emits one bit
    /// per tap (order matches the tap list).
    void step(std::vector<bool>& bits_out);

    /// Runs `length` cycles and collects one stream per tap.
    std::vector<StochasticNumber> encode(std::size_t length);

    const std::string& id() const { return id_; }
    const std::vector<SneTap>& taps() const { return taps_; }
    LatentMode mode() const { return mode_; }
    const Memristor& device() const { return device_; }

private:
    std::string id_;
    std::vector<SneTap> taps_;
    LatentMode mode_;
    Rng rng_;
    Memristor device_;
    std::vector<double> drive_volts_;  // device mode: per-tap comparison level
};

/// Builds taps from (target, negated) pairs, filling in the voltage metadata
/// from the default fits.
std::vector<SneTap> make_taps(const std::vector<std::pair<double, bool>>& targets);

/// Convenience wrapper for one-shot encoding under a master seed.
std::vector<StochasticNumber> encode(const std::vector<std::pair<double, bool>>& targets,
                                     std::size_t length, LatentMode mode, std::uint64_t seed,
                                     const MemristorParams& params = {},
                                     const OuParams& ou = {});

}  // namespace scsim

#endif
