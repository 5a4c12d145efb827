#include "scsim/device.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>

#include "scsim/errors.hpp"

namespace scsim {

void MemristorParams::validate() const {
    if (!(vth_mean > vhold_mean) || !(vhold_mean > 0.0))
        throw ValidationError("memristor params: need vth_mean > vhold_mean > 0");
    if (vth_std < 0.0 || vhold_std < 0.0)
        throw ValidationError("memristor params: negative standard deviation");
    if (!(t_switch < t_relax))
        throw ValidationError("memristor params: need t_switch < t_relax");
    if (cycle_budget < t_switch + t_relax)
        throw ValidationError("memristor params: cycle_budget below t_switch + t_relax");
}

double OuParams::stationary_std() const { return sigma / std::sqrt(2.0 * theta); }

void OuParams::validate() const {
    if (!(theta > 0.0)) throw ValidationError("ou params: theta must be positive");
    if (sigma < 0.0) throw ValidationError("ou params: sigma must be nonnegative");
    if (!std::isfinite(stationary_std()))
        throw ValidationError("ou params: stationary std not finite");
}

MemristorParams MemristorParams::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open device parameter file: " + path);

    MemristorParams p;
    std::map<std::string, double*> fields = {
        {"vth_mean", &p.vth_mean},       {"vth_std", &p.vth_std},
        {"vhold_mean", &p.vhold_mean},   {"vhold_std", &p.vhold_std},
        {"t_switch", &p.t_switch},       {"t_relax", &p.t_relax},
        {"e_switch", &p.e_switch},       {"on_off_ratio", &p.on_off_ratio},
        {"cycle_budget", &p.cycle_budget}};

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq;
        double value;
        if (!(ls >> key)) continue;  // blank line
        if (!(ls >> eq >> value) || eq != "=")
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": expected `key = value`");
        auto it = fields.find(key);
        if (it == fields.end())
            throw ValidationError(path + ":" + std::to_string(lineno) +
                                  ": unknown device parameter `" + key + "`");
        *it->second = value;
    }
    p.validate();
    return p;
}

void MemristorParams::write(std::ostream& os) const {
    os << "# volatile memristor behavioral parameters (SI units)\n"
       << "vth_mean = " << vth_mean << "\n"
       << "vth_std = " << vth_std << "\n"
       << "vhold_mean = " << vhold_mean << "\n"
       << "vhold_std = " << vhold_std << "\n"
       << "t_switch = " << t_switch << "\n"
       << "t_relax = " << t_relax << "\n"
       << "e_switch = " << e_switch << "\n"
       << "on_off_ratio = " << on_off_ratio << "\n"
       << "cycle_budget = " << cycle_budget << "\n";
}

Memristor::Memristor(const MemristorParams& params, const OuParams& ou, SamplingMode mode)
    : params_(params), ou_(ou) {
    params_.validate();
    ou_.validate();
    state_.mode = mode;
    state_.current_vth = params_.vth_mean;
}

double Memristor::sample_vth(Rng& rng) {
    if (state_.mode == SamplingMode::IidGaussian) {
        state_.current_vth = params_.vth_mean + params_.vth_std * rng.gaussian();
    } else {
        // Exact one-cycle transition of the OU process: the conditional law of
        // V after a unit step is Gaussian with mean mu + (V - mu) e^{-theta}
        // and variance sigma^2 (1 - e^{-2 theta}) / (2 theta).
        double decay = std::exp(-ou_.theta);
        double step_std =
            ou_.sigma * std::sqrt((1.0 - decay * decay) / (2.0 * ou_.theta));
        state_.current_vth = ou_.mu + (state_.current_vth - ou_.mu) * decay +
                             step_std * rng.gaussian();
    }
    ++state_.cycle_count;
    if (!state_.endurance_exceeded && state_.cycle_count > kEnduranceCycles) {
        state_.endurance_exceeded = true;
        std::cerr << "warning: memristor exceeded demonstrated endurance of "
                  << kEnduranceCycles << " cycles\n";
    }
    return state_.current_vth;
}

bool Memristor::switch_event(double vin, double vth_sample) {
    if (vin < 0.0) throw ValidationError("switch_event: negative drive voltage");
    bool switched = vin > vth_sample;
    if (switched) {
        // Recomputing the product keeps the accumulator exactly equal to
        // switch_count * e_switch instead of drifting by summation rounding.
        ++state_.switch_count;
        state_.energy_accumulated =
            static_cast<double>(state_.switch_count) * params_.e_switch;
    }
    return switched;
}

double frame_latency(std::uint64_t bit_length, const MemristorParams& params) {
    if (bit_length == 0) throw ValidationError("frame_latency: bit_length must be >= 1");
    auto budget_ps = static_cast<std::uint64_t>(std::llround(params.cycle_budget * 1e12));
    return static_cast<double>(bit_length * budget_ps) / 1e12;
}

}  // namespace scsim
