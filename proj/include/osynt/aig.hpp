#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace osynt {

/// And-inverter graph in the ASCII AIGER 1.x dialect. Literals follow the
/// usual encoding: variable v is literal 2v, its negation 2v+1; literals 0
/// and 1 are constant false/true. Latches reset to 0. The gate list is kept
/// in topological order.
struct AigCircuit {
    struct Latch {
        uint32_t lit = 0;   // even literal defined by this latch
        uint32_t next = 0;  // next-state function
    };
    struct AndGate {
        uint32_t lhs = 0;  // even literal defined by this gate
        uint32_t rhs0 = 0;
        uint32_t rhs1 = 0;
    };

    uint32_t max_var = 0;
    std::vector<uint32_t> inputs;  // even literals
    std::vector<Latch> latches;
    std::vector<uint32_t> outputs;
    std::vector<AndGate> ands;
    // Symbol names, aligned with the vectors above; "" when unnamed.
    std::vector<std::string> input_names;
    std::vector<std::string> latch_names;
    std::vector<std::string> output_names;
};

struct StepResult {
    uint64_t outputs = 0;       // bit i = value of output i
    uint64_t next_latches = 0;  // bit i = next value of latch i
};

/// Safety specification: one bad-state output plus an input partition into
/// system-controlled and environment-controlled inputs (indices into
/// circuit.inputs, both sorted).
struct SafetySpec {
    AigCircuit circuit;
    std::vector<uint32_t> controllable;
    std::vector<uint32_t> uncontrollable;
    std::vector<std::string> warnings;
};

/// Parse ASCII AIGER ("aag" header). Binary "aig" files are rejected.
AigCircuit parse_aag(std::string_view text);

std::string print_aag(const AigCircuit& circuit);

/// One synchronous step from the given latch state under the given input
/// valuation (bit i of `inputs` feeds circuit input i).
StepResult simulate(const AigCircuit& circuit, uint64_t latches, uint64_t inputs);

/// Vector variant; lengths must match the circuit.
StepResult simulate(const AigCircuit& circuit, const std::vector<bool>& latches,
                    const std::vector<bool>& inputs);

/// Split inputs by the "controllable_" name prefix and check the circuit is
/// a well-formed safety specification (exactly one output, named inputs).
SafetySpec classify_safety_spec(const AigCircuit& circuit);

}  // namespace osynt
