#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osynt/aig.hpp"
#include "osynt/arena.hpp"
#include "osynt/cube.hpp"
#include "osynt/solver.hpp"

namespace osynt {

// One reaction of the machine: on any input valuation matching `input`,
// emit `output` and move to `target`.
struct MealyTransition {
    Cube input;
    uint32_t output = 0;
    uint32_t target = 0;
};

// Finite-state transducer extracted from a winning strategy. Rows are
// input-deterministic and input-complete; state 0 is initial.
struct MealyMachine {
    uint32_t num_states = 0;
    uint32_t input_bits = 0;
    uint32_t output_bits = 0;
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;
    std::vector<std::vector<MealyTransition>> rows;
};

// Walks the arena under Eve's strategy, folding every environment choice
// into one machine row per reachable Adam vertex. Throws UnrealizableError
// if Adam wins the initial vertex.
MealyMachine strategy_to_mealy(const GameArena& arena, const Solution& solution);

// Binary state encoding over ceil(log2(num_states)) latches (state 0 =
// initial = all-zero latches); every output and next-state bit is built by
// recursive Shannon expansion over (latch bits, input bits) with structural
// hashing and constant propagation. Unreachable (state, input) entries are 0.
AigCircuit mealy_to_aiger(const MealyMachine& m);

// AND gates only, matching the `aag` header A field.
uint64_t gate_count(const AigCircuit& c);

// max(0, 2 - log10((size+1)/(ref+1))): 2 points at the reference size, more
// for smaller circuits, down to 0 at 100x the reference.
double quality_score(uint64_t size, uint64_t reference);

}  // namespace osynt
