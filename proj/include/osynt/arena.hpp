#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osynt/aig.hpp"
#include "osynt/hoa.hpp"

namespace osynt {

enum class Player : uint8_t { eve = 0, adam = 1 };

inline Player opponent(Player p) {
    return p == Player::eve ? Player::adam : Player::eve;
}

/// Where an arena vertex came from.
struct VertexTag {
    enum class Kind : uint8_t {
        state,        // automaton state q (Adam picks the uncontrollable valuation)
        choice,       // (q, i): Eve picks outputs
        delay,        // merged (priority, target) pair on the way back to a state
        latch_state,  // circuit latch valuation (Adam to move)
        latch_choice, // (latch valuation, uncontrollable valuation)
        sink,         // losing sink of a safety arena
    };
    Kind kind = Kind::state;
    uint32_t state = 0;  // automaton state or latch valuation
    uint32_t input = 0;  // uncontrollable valuation (choice vertices)

    std::string describe() const;
};

/// Two-player game graph with min-even parity on vertex priorities. Plays
/// alternate Adam valuation picks and Eve output picks; the construction
/// guarantees every vertex has a successor.
struct GameArena {
    struct Vertex {
        Player owner = Player::eve;
        uint32_t priority = 0;
    };

    std::vector<Vertex> vertices;
    std::vector<std::vector<uint32_t>> succ;
    uint32_t initial = 0;
    std::vector<VertexTag> tags;
    /// For Eve choice vertices: the representative controllable valuation of
    /// each outgoing edge (aligned with succ); empty elsewhere.
    std::vector<std::vector<uint32_t>> edge_output;

    uint32_t input_bits = 0;   // uncontrollable valuation width
    uint32_t output_bits = 0;  // controllable valuation width
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;

    size_t size() const { return vertices.size(); }
};

/// Build the synthesis game of a normalized parity automaton. Adam picks an
/// uncontrollable valuation at each state vertex, Eve answers with a
/// controllable one; distinct (priority, target) answers are merged and the
/// transition priority is realized on the vertex carrying the pair, so the
/// minimal priority recurring in an arena play equals the minimal transition
/// priority recurring in the induced run.
GameArena arena_from_parity_automaton(const ParityAutomaton& aut);

/// Build the safety game of an extended AIGER specification over reachable
/// latch states. Raising the bad output leads to the unique priority-1 sink;
/// everything else has priority 0.
GameArena arena_from_safety_spec(const SafetySpec& spec);

/// Debug dump in PGSolver format: `id priority owner successors "label";`
/// per vertex (owner 0 = Eve).
std::string print_pgsolver(const GameArena& arena);

/// Vertices of the (at most one) losing safety sink.
std::vector<uint32_t> sink_vertices(const GameArena& arena);

}  // namespace osynt
