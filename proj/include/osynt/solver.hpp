#pragma once

#include <cstdint>
#include <vector>

#include "osynt/arena.hpp"

namespace osynt {

inline constexpr uint32_t kNoVertex = UINT32_MAX;

/// Winner per vertex plus one positional strategy per player, defined at
/// least on the vertices a player owns inside their own winning region
/// (kNoVertex elsewhere). Strategies never leave the owner's region.
struct Solution {
    std::vector<Player> winner;
    std::vector<uint32_t> strategy_eve;
    std::vector<uint32_t> strategy_adam;

    Player winner_at(uint32_t v) const { return winner[v]; }
};

/// Least set containing `target` that `player` can force the play into:
/// player-owned vertices with a successor in the set and opponent-owned
/// vertices with all successors in the set are added until stable.
std::vector<uint32_t> attractor(const GameArena& arena, Player player,
                                const std::vector<uint32_t>& target);

/// Safety game: Adam wins exactly the Adam-attractor of `unsafe`, Eve the
/// complement (classical fixpoint).
Solution solve_safety(const GameArena& arena, const std::vector<uint32_t>& unsafe);

/// Min-even parity via the classical recursive algorithm.
Solution solve_parity_zielonka(const GameArena& arena);

/// Min-even parity via distraction fixpoint iteration: one "distraction"
/// bit per vertex, sweeps in ascending vertex order per priority level,
/// inner levels restarting whenever an outer level flips a bit.
Solution solve_parity_dfi(const GameArena& arena);

/// Reference oracle: enumerate all positional strategy pairs (arena must
/// have at most 12 vertices and out-degree at most 4). Eve wins v iff some
/// Eve strategy beats every Adam strategy from v.
std::vector<Player> brute_force_solve(const GameArena& arena);

/// Eventually-cyclic play induced by two positional strategies.
struct Lasso {
    std::vector<uint32_t> prefix;  // up to, excluding, the first repeated vertex
    std::vector<uint32_t> cycle;   // the repeated part, starting at that vertex
};

Lasso play(const GameArena& arena, const std::vector<uint32_t>& strategy_eve,
           const std::vector<uint32_t>& strategy_adam, uint32_t from);

/// Validate the Solution contract: total winner map, strategies defined on
/// owned vertices of the owner's region and staying inside that region.
/// Throws on violation.
void check_solution(const GameArena& arena, const Solution& s);

}  // namespace osynt
