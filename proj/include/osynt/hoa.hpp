#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "osynt/cube.hpp"

namespace osynt {

enum class AccKind { min, max };
enum class AccPolarity { even, odd };

/// Acceptance descriptor in parity terms: a run is accepting iff the
/// min (resp. max) priority seen infinitely often has the given parity.
/// Buchi is recorded as (min, even, 1) and co-Buchi as (min, odd, 1);
/// both identifications are exact.
struct Acceptance {
    AccKind kind = AccKind::min;
    AccPolarity polarity = AccPolarity::even;
    uint32_t colors = 1;

    bool operator==(const Acceptance&) const = default;
};

/// Transitions may carry no color in the input; such priorities stay at
/// kNoPriority until normalize_acceptance() resolves them.
inline constexpr int kNoPriority = -1;

struct Transition {
    Guard guard;
    uint32_t target = 0;
    int priority = kNoPriority;
};

/// Deterministic word automaton with transition-based parity acceptance and
/// an input/output split of the atomic propositions. Guards are cube sets
/// (DNF) over AP indices; valuation bit i is AP i.
struct ParityAutomaton {
    uint32_t num_states = 0;
    uint32_t initial = 0;
    std::vector<std::string> aps;
    std::vector<uint32_t> controllable;  // sorted AP indices driven by the system
    std::vector<std::vector<Transition>> transitions;  // indexed by source state
    Acceptance acceptance;
    /// True once the automaton is known deterministic, complete, and in
    /// min-even form with every transition carrying a priority.
    bool normalized = false;

    std::vector<uint32_t> uncontrollable() const;
    bool is_controllable(uint32_t ap) const;
};

/// Parse extended HOA (HOA v1 plus a controllable-AP header). Supported
/// acceptance: the four parity variants, Buchi, co-Buchi, all, none.
ParityAutomaton parse_ehoa(std::string_view text);

std::string print_ehoa(const ParityAutomaton& aut);

/// Add a rejecting sink state and route every uncovered valuation to it.
/// Identity when the automaton is already complete.
ParityAutomaton complete(const ParityAutomaton& aut);

/// Rewrite priorities to min-even parity, resolve colorless transitions,
/// and complete the automaton. Language-preserving.
ParityAutomaton normalize_acceptance(const ParityAutomaton& aut);

/// Strict determinism: no two transitions of a state have overlapping
/// guards (regardless of targets).
bool is_deterministic(const ParityAutomaton& aut);
bool is_complete(const ParityAutomaton& aut);

/// Unique transition of `state` enabled under `valuation`, or nullptr when
/// no guard matches. Requires a deterministic automaton.
const Transition* matching_transition(const ParityAutomaton& aut, uint32_t state,
                                      uint32_t valuation);

/// Canonical acceptance formula for the descriptor, e.g.
/// "Inf(0) | (Fin(1) & Inf(2))" for parity min even 3.
std::string acceptance_formula(const Acceptance& acc);

}  // namespace osynt
