#include "scsim/gates.hpp"

#include <cmath>

namespace scsim {

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::And:
        case GateKind::Or:
        case GateKind::Xor:
        case GateKind::Cordiv:
            return 2;
        case GateKind::Not:
        case GateKind::Dff:
            return 1;
        case GateKind::Mux2:
            return 3;
        case GateKind::Mux4:
            return 6;
    }
    return 0;
}

std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::And: return "AND";
        case GateKind::Or: return "OR";
        case GateKind::Xor: return "XOR";
        case GateKind::Not: return "NOT";
        case GateKind::Mux2: return "MUX2";
        case GateKind::Mux4: return "MUX4";
        case GateKind::Dff: return "DFF";
        case GateKind::Cordiv: return "CORDIV";
    }
    return "?";
}

GateKind gate_from_name(const std::string& name) {
    if (name == "AND") return GateKind::And;
    if (name == "OR") return GateKind::Or;
    if (name == "XOR") return GateKind::Xor;
    if (name == "NOT") return GateKind::Not;
    if (name == "MUX2") return GateKind::Mux2;
    if (name == "MUX4") return GateKind::Mux4;
    if (name == "DFF") return GateKind::Dff;
    if (name == "CORDIV") return GateKind::Cordiv;
    throw ValidationError("unknown gate kind `" + name + "`");
}

bool eval_gate_step(GateKind kind, std::span<const bool> in, GateState& state) {
    switch (kind) {
        case GateKind::And:
            return in[0] && in[1];
        case GateKind::Or:
            return in[0] || in[1];
        case GateKind::Xor:
            return in[0] != in[1];
        case GateKind::Not:
            return !in[0];
        case GateKind::Mux2:
            return in[0] ? in[2] : in[1];
        case GateKind::Mux4: {
            int idx = (in[0] ? 2 : 0) + (in[1] ? 1 : 0);
            return in[2 + idx];
        }
        case GateKind::Dff: {
            bool out = state.q;
            state.q = in[0];
            return out;
        }
        case GateKind::Cordiv: {
            bool out = in[1] ? in[0] : state.q;
            state.q = out;
            return out;
        }
    }
    return false;
}

StochasticNumber apply_gate(GateKind kind,
                            const std::vector<const StochasticNumber*>& inputs) {
    if (static_cast<int>(inputs.size()) != gate_arity(kind))
        throw ValidationError("apply_gate: " + gate_name(kind) + " expects " +
                              std::to_string(gate_arity(kind)) + " inputs");
    std::size_t length = inputs[0]->length();
    for (const auto* s : inputs)
        if (s->length() != length)
            throw ValidationError("apply_gate: input stream length mismatch");
    if (length == 0) throw ValidationError("apply_gate: empty input streams");

    StochasticNumber out(length);
    GateState state;
    bool bits[6];
    for (std::size_t i = 0; i < length; ++i) {
        for (std::size_t k = 0; k < inputs.size(); ++k) bits[k] = inputs[k]->bit(i);
        if (eval_gate_step(kind, std::span<const bool>(bits, inputs.size()), state))
            out.set_bit(i, true);
    }
    return out;
}

StochasticNumber cordiv(const StochasticNumber& num, const StochasticNumber& den,
                        std::vector<ContractWarning>* warnings) {
    if (num.length() != den.length())
        throw ValidationError("cordiv: stream length mismatch");
    if (num.empty()) throw ValidationError("cordiv: empty streams");
    if (den.ones() == 0)
        throw DivisionUndefinedError("cordiv: denominator stream is all zero");

    StochasticNumber out(num.length());
    bool held = false;
    for (std::size_t i = 0; i < num.length(); ++i) {
        bool q = den.bit(i) ? num.bit(i) : held;
        held = q;
        if (q) out.set_bit(i, true);
    }

    if (warnings) {
        double pn = estimate_probability(num);
        double pd = estimate_probability(den);
        double slack = 3.0 * std::sqrt(0.25 / static_cast<double>(num.length()));
        if (pn > pd + slack)
            warnings->push_back({"cordiv", "numerator probability exceeds denominator", pn - pd});
        try {
            double s = scc(num, den);
            if (s < 0.8)
                warnings->push_back(
                    {"cordiv", "numerator/denominator not positively correlated", s});
        } catch (const UndefinedCorrelationError&) {
            // constant stream: ordering check above already covers the degenerate cases
        }
    }
    return out;
}

}  // namespace scsim
