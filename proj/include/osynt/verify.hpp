#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osynt/aig.hpp"
#include "osynt/hoa.hpp"

namespace osynt {

/// Model-checking outcome. On FAIL, `witness` holds one uncontrollable
/// valuation per step (bit i = i-th uncontrollable input/AP of the spec).
/// Safety witnesses are straight-line: the bad output rises on the last
/// step. Parity witnesses are lassos: steps from `cycle_start` onward repeat
/// forever, and the minimal transition priority on that loop is odd. Every
/// witness is replayed through the simulator before being returned.
struct VerificationResult {
    bool pass = false;
    std::string reason;
    std::vector<uint64_t> witness;
    size_t cycle_start = 0;
};

/// Closed loop of a safety spec and a controller: the controller's outputs
/// drive the spec's controllable inputs (matched by name), the composition
/// keeps only the uncontrollable inputs, latches are spec's then
/// controller's, and the single output is the spec's bad output.
AigCircuit compose(const SafetySpec& spec, const AigCircuit& controller);

/// Breadth-first reachability over the joint latch space (capped at 24
/// latches, 16 uncontrollable inputs): PASS iff no reachable state and input
/// raise bad; otherwise a shortest counterexample.
VerificationResult verify_safety_controller(const SafetySpec& spec,
                                            const AigCircuit& controller);

/// Product of controller latch states and automaton states, one edge per
/// uncontrollable valuation carrying the matched transition's priority
/// (capped at 2^24 product states). PASS iff every reachable cycle has even
/// minimal priority, decided by recursive SCC decomposition: an SCC whose
/// minimal priority is odd yields a lasso; otherwise that priority's edges
/// are deleted and the SCC re-examined.
VerificationResult verify_parity_controller(const ParityAutomaton& aut,
                                            const AigCircuit& controller);

}  // namespace osynt
