#include "scsim/encoder.hpp"

#include <cmath>
#include <utility>

#include "scsim/errors.hpp"

namespace scsim {

double SigmoidFit::probability(double volts) const {
    double rising = 1.0 / (1.0 + std::exp(-slope * (volts - midpoint)));
    return orientation == Orientation::Rising ? rising : 1.0 - rising;
}

double SigmoidFit::voltage(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw ValidationError("sigmoid fit inverse: probability must lie strictly in (0,1)");
    double logit = std::log(p / (1.0 - p));
    return orientation == Orientation::Rising ? midpoint + logit / slope
                                              : midpoint - logit / slope;
}

SigmoidFit input_voltage_fit() { return {3.56, 2.24, SigmoidFit::Orientation::Rising}; }
SigmoidFit reference_voltage_fit() { return {11.5, 0.57, SigmoidFit::Orientation::Falling}; }

double p_from_vin(double vin) { return input_voltage_fit().probability(vin); }
double vin_from_p(double p) { return input_voltage_fit().voltage(p); }
double p_from_vref(double vref) { return reference_voltage_fit().probability(vref); }
double vref_from_p(double p) { return reference_voltage_fit().voltage(p); }

SneUnit::SneUnit(std::string id, std::vector<SneTap> taps, LatentMode mode,
                 std::uint64_t seed, const MemristorParams& params, const OuParams& ou)
    : id_(std::move(id)),
      taps_(std::move(taps)),
      mode_(mode),
      rng_(seed),
      device_(params, ou, SamplingMode::IidGaussian) {
    if (taps_.empty()) throw ValidationError("encoder unit needs at least one tap");
    for (const auto& tap : taps_) {
        if (!(tap.target >= 0.0 && tap.target <= 1.0))
            throw ValidationError("encoder tap target outside [0,1]");
    }
    if (mode_ == LatentMode::DeviceBacked) {
        // Comparison level that makes the threshold comparison fire with
        // exactly the comparator probability: the Gaussian quantile of the
        // device's threshold law. Degenerate targets map to +-inf and yield
        // constant streams.
        drive_volts_.reserve(taps_.size());
        const auto& p = device_.params();
        for (const auto& tap : taps_) {
            double comparator_p = tap.negated ? 1.0 - tap.target : tap.target;
            drive_volts_.push_back(p.vth_mean + p.vth_std * normal_quantile(comparator_p));
        }
    }
}

void SneUnit::step(std::vector<bool>& bits_out) {
    bits_out.resize(taps_.size());
    if (mode_ == LatentMode::Ideal) {
        double u = rng_.uniform01();
        for (std::size_t i = 0; i < taps_.size(); ++i) {
            bool raw = u < (taps_[i].negated ? 1.0 - taps_[i].target : taps_[i].target);
            bits_out[i] = taps_[i].negated ? !raw : raw;
        }
    } else {
        double vth = device_.sample_vth(rng_);
        for (std::size_t i = 0; i < taps_.size(); ++i) {
            double v = drive_volts_[i];
            // -inf never switches, +inf always; clamp negatives to 0 since the
            // drive pulse is nonnegative and a comparison level below 0 can
            // only come from a sub-zero quantile of an unphysical tail.
            bool raw = std::isinf(v) ? v > 0.0
                                     : device_.switch_event(std::max(v, 0.0), vth);
            bits_out[i] = taps_[i].negated ? !raw : raw;
        }
    }
}

std::vector<StochasticNumber> SneUnit::encode(std::size_t length) {
    if (length == 0) throw ValidationError("encode: length must be >= 1");
    std::vector<StochasticNumber> streams(taps_.size(), StochasticNumber(length));
    std::vector<bool> bits;
    for (std::size_t cycle = 0; cycle < length; ++cycle) {
        step(bits);
        for (std::size_t i = 0; i < taps_.size(); ++i)
            if (bits[i]) streams[i].set_bit(cycle, true);
    }
    return streams;
}

std::vector<SneTap> make_taps(const std::vector<std::pair<double, bool>>& targets) {
    std::vector<SneTap> taps;
    taps.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        SneTap tap;
        tap.target = targets[i].first;
        tap.negated = targets[i].second;
        double comparator_p = tap.negated ? 1.0 - tap.target : tap.target;
        if (comparator_p > 0.0 && comparator_p < 1.0) {
            if (i == 0)
                tap.vin = vin_from_p(comparator_p);
            else
                tap.vref = vref_from_p(comparator_p);
        }
        taps.push_back(tap);
    }
    return taps;
}

std::vector<StochasticNumber> encode(const std::vector<std::pair<double, bool>>& targets,
                                     std::size_t length, LatentMode mode, std::uint64_t seed,
                                     const MemristorParams& params, const OuParams& ou) {
    SneUnit unit("sne0", make_taps(targets), mode, seed, params, ou);
    return unit.encode(length);
}

}  // namespace scsim
