#ifndef SCSIM_GATES_HPP
#define SCSIM_GATES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scsim/bitstream.hpp"
#include "scsim/errors.hpp"

namespace scsim {

/// Gate kinds available to netlists. MUX2 inputs are ordered
/// [select, data0, data1] with select=1 routing data1; MUX4 inputs are
/// [sel_hi, sel_lo, d0, d1, d2, d3] with index sel_hi*2 + sel_lo.
/// CORDIV inputs are [numerator, denominator].
enum class GateKind { And, Or, Xor, Not, Mux2, Mux4, Dff, Cordiv };

int gate_arity(GateKind kind);
std::string gate_name(GateKind kind);
GateKind gate_from_name(const std::string& name);  // throws ValidationError

/// One bit of memory for DFF and CORDIV; initial content is 0.
struct GateState {
    bool q = false;
};

/// Evaluates one cycle of a gate. DFF returns the previous cycle's input and
/// latches the new one. CORDIV returns the numerator bit while the
/// denominator bit is 1 and otherwise holds the last emitted quotient bit.
bool eval_gate_step(GateKind kind, std::span<const bool> inputs, GateState& state);

/// Applies a gate across whole streams, cycle by cycle. Inputs must share one
/// length; state elements start at 0.
StochasticNumber apply_gate(GateKind kind, const std::vector<const StochasticNumber*>& inputs);

/// Correlated division: quotient probability approximates P(num)/P(den).
/// Preconditions (statistical, not per-bit): P(num) <= P(den), the two streams
/// positively correlated (shared-encoder construction), P(den) > 0. An
/// all-zero denominator throws DivisionUndefinedError; an observed correlation
/// or ordering violation appends a ContractWarning when a collector is given.
StochasticNumber cordiv(const StochasticNumber& num, const StochasticNumber& den,
                        std::vector<ContractWarning>* warnings = nullptr);

}  // namespace scsim

#endif
