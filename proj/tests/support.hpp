#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "osynt/aig.hpp"
#include "osynt/arena.hpp"
#include "osynt/bench.hpp"
#include "osynt/cube.hpp"
#include "osynt/errors.hpp"
#include "osynt/hoa.hpp"
#include "osynt/pipeline.hpp"
#include "osynt/solver.hpp"
#include "osynt/synthesis.hpp"
#include "osynt/verify.hpp"

namespace testsupport {

using namespace osynt;

// ---- arena helpers -------------------------------------------------------

inline GameArena make_arena(std::vector<std::pair<Player, uint32_t>> verts,
                            std::vector<std::vector<uint32_t>> succ,
                            uint32_t initial = 0) {
    GameArena a;
    for (auto [owner, pri] : verts)
        a.vertices.push_back({owner, pri});
    a.succ = std::move(succ);
    a.tags.resize(a.vertices.size());
    for (uint32_t v = 0; v < a.tags.size(); ++v)
        a.tags[v] = {VertexTag::Kind::state, v, 0};
    a.edge_output.resize(a.vertices.size());
    a.initial = initial;
    return a;
}

// Definition-level attractor: iterate the one-step operator to a fixpoint.
inline std::vector<uint32_t> naive_attractor(const GameArena& a, Player p,
                                             const std::vector<uint32_t>& target) {
    std::vector<char> in(a.size(), 0);
    for (uint32_t t : target)
        in[t] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (uint32_t v = 0; v < a.size(); ++v) {
            if (in[v])
                continue;
            bool any = false, all = !a.succ[v].empty();
            for (uint32_t w : a.succ[v]) {
                any = any || in[w];
                all = all && in[w];
            }
            if (a.vertices[v].owner == p ? any : all) {
                in[v] = 1;
                grew = true;
            }
        }
    }
    std::vector<uint32_t> out;
    for (uint32_t v = 0; v < a.size(); ++v)
        if (in[v])
            out.push_back(v);
    return out;
}

// Run all solvers, insist they agree, validate the strategies, and return
// the common winner map.
inline std::vector<Player> solve_all_ways(const GameArena& a) {
    Solution z = solve_parity_zielonka(a);
    Solution d = solve_parity_dfi(a);
    check_solution(a, z);
    check_solution(a, d);
    if (z.winner != d.winner)
        throw Error("solver disagreement");
    return z.winner;
}

// ---- acceptance oracle ---------------------------------------------------

// Canonical parity formulas are decided at the most significant color that
// recurs (smallest for min, largest for max): Inf-atoms accept, Fin-atoms
// reject. With no recurring color the innermost atom decides.
inline bool formula_accepts(const Acceptance& acc, const std::set<int>& inf) {
    bool even_pol = acc.polarity == AccPolarity::even;
    auto matches_pol = [&](int c) { return (c % 2 == 0) == even_pol; };
    if (acc.kind == AccKind::min) {
        for (int c = 0; c < static_cast<int>(acc.colors); ++c)
            if (inf.count(c))
                return matches_pol(c);
        return !matches_pol(static_cast<int>(acc.colors) - 1);
    }
    for (int c = static_cast<int>(acc.colors) - 1; c >= 0; --c)
        if (inf.count(c))
            return matches_pol(c);
    return !matches_pol(0);
}

// Deterministic step; nullptr when no transition fires (possible before
// completion).
inline const Transition* step_automaton(const ParityAutomaton& aut, uint32_t state,
                                        uint32_t valuation) {
    return matching_transition(aut, state, valuation);
}

// Whether the automaton accepts u . v^omega under its own descriptor.
// Missing transitions reject. Colorless transitions add no color.
inline bool lasso_accepted(const ParityAutomaton& aut,
                           const std::vector<uint32_t>& u,
                           const std::vector<uint32_t>& v) {
    uint32_t q = aut.initial;
    for (uint32_t a : u) {
        const Transition* t = step_automaton(aut, q, a);
        if (t == nullptr)
            return false;
        q = t->target;
    }
    // Iterate the cycle word until the state at its start repeats.
    std::map<uint32_t, size_t> seen;
    std::vector<std::vector<int>> colors_per_round;
    for (;;) {
        auto [it, fresh] = seen.emplace(q, colors_per_round.size());
        if (!fresh) {
            std::set<int> inf;
            for (size_t round = it->second; round < colors_per_round.size(); ++round)
                for (int c : colors_per_round[round])
                    inf.insert(c);
            return formula_accepts(aut.acceptance, inf);
        }
        colors_per_round.emplace_back();
        for (uint32_t a : v) {
            const Transition* t = step_automaton(aut, q, a);
            if (t == nullptr)
                return false;
            if (t->priority != kNoPriority)
                colors_per_round.back().push_back(t->priority);
            q = t->target;
        }
    }
}

// Same run on a normalized automaton, judged by the min-even rule alone.
inline bool lasso_accepted_min_even(const ParityAutomaton& aut,
                                    const std::vector<uint32_t>& u,
                                    const std::vector<uint32_t>& v) {
    uint32_t q = aut.initial;
    for (uint32_t a : u) {
        const Transition* t = step_automaton(aut, q, a);
        if (t == nullptr)
            throw Error("normalized automaton is incomplete");
        q = t->target;
    }
    std::map<uint32_t, size_t> seen;
    std::vector<int> mins;
    for (;;) {
        auto [it, fresh] = seen.emplace(q, mins.size());
        if (!fresh) {
            int m = INT32_MAX;
            for (size_t round = it->second; round < mins.size(); ++round)
                m = std::min(m, mins[round]);
            if (m == INT32_MAX)
                throw Error("normalized automaton has an unassigned priority");
            return m % 2 == 0;
        }
        mins.push_back(INT32_MAX);
        for (uint32_t a : v) {
            const Transition* t = step_automaton(aut, q, a);
            if (t == nullptr)
                throw Error("normalized automaton is incomplete");
            if (t->priority == kNoPriority)
                throw Error("normalized automaton has an unassigned priority");
            mins.back() = std::min(mins.back(), t->priority);
            q = t->target;
        }
    }
}

// ---- random automata -------------------------------------------------------

// Deterministic complete random automaton; guards of a state are built by
// recursive cube splitting, so they always partition the valuation space.
inline ParityAutomaton random_automaton(uint64_t seed, uint32_t max_states,
                                        uint32_t max_aps, bool allow_colorless) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 3);
    auto pick = [&](uint32_t k) { return static_cast<uint32_t>(rng() % k); };
    ParityAutomaton aut;
    aut.num_states = 1 + pick(max_states);
    uint32_t naps = 1 + pick(max_aps);
    for (uint32_t i = 0; i < naps; ++i) {
        bool ctrl = rng() % 2 == 0;
        aut.aps.push_back((ctrl ? "c" : "u") + std::to_string(i));
        if (ctrl)
            aut.controllable.push_back(i);
    }
    aut.acceptance.kind = rng() % 2 ? AccKind::min : AccKind::max;
    aut.acceptance.polarity = rng() % 2 ? AccPolarity::even : AccPolarity::odd;
    aut.acceptance.colors = 1 + pick(5);
    aut.transitions.resize(aut.num_states);
    for (uint32_t q = 0; q < aut.num_states; ++q) {
        std::vector<Cube> cells{Cube{}};
        for (int round = 0; round < 3; ++round) {
            std::vector<Cube> next;
            for (const Cube& c : cells) {
                uint32_t free_aps = ~c.mask & ((1u << naps) - 1);
                if (free_aps != 0 && rng() % 100 < 55) {
                    std::vector<uint32_t> free_bits;
                    for (uint32_t b = 0; b < naps; ++b)
                        if (free_aps & (1u << b))
                            free_bits.push_back(b);
                    uint32_t bit =
                        1u << free_bits[pick(static_cast<uint32_t>(free_bits.size()))];
                    next.push_back({c.mask | bit, c.bits});
                    next.push_back({c.mask | bit, c.bits | bit});
                } else {
                    next.push_back(c);
                }
            }
            cells = std::move(next);
        }
        for (const Cube& c : cells) {
            Transition t;
            t.guard = {c};
            t.target = pick(aut.num_states);
            t.priority = (allow_colorless && rng() % 4 == 0)
                             ? kNoPriority
                             : static_cast<int>(pick(aut.acceptance.colors));
            aut.transitions[q].push_back(t);
        }
    }
    aut.initial = pick(aut.num_states);
    return parse_ehoa(print_ehoa(aut));  // validates and stamps flags
}

inline bool isomorphic(const ParityAutomaton& a, const ParityAutomaton& b) {
    if (a.num_states != b.num_states || a.initial != b.initial || a.aps != b.aps ||
        a.controllable != b.controllable || !(a.acceptance == b.acceptance))
        return false;
    uint32_t naps = static_cast<uint32_t>(a.aps.size());
    for (uint32_t q = 0; q < a.num_states; ++q) {
        for (uint32_t v = 0; v < (1u << naps); ++v) {
            const Transition* ta = matching_transition(a, q, v);
            const Transition* tb = matching_transition(b, q, v);
            if ((ta == nullptr) != (tb == nullptr))
                return false;
            if (ta != nullptr && (ta->target != tb->target || ta->priority != tb->priority))
                return false;
        }
    }
    return true;
}

// ---- witness replay --------------------------------------------------------

// Drive spec and controller side by side (independently of compose) and
// confirm the bad output rises exactly on the last witness step.
inline bool replay_safety_witness(const SafetySpec& spec, const AigCircuit& ctrl,
                                  const std::vector<uint64_t>& witness) {
    if (witness.empty())
        return false;
    std::map<std::string, size_t> ctrl_in, ctrl_out;
    for (size_t k = 0; k < ctrl.input_names.size(); ++k)
        ctrl_in[ctrl.input_names[k]] = k;
    for (size_t k = 0; k < ctrl.output_names.size(); ++k)
        ctrl_out[ctrl.output_names[k]] = k;
    uint64_t sl = 0, cl = 0;
    for (size_t step = 0; step < witness.size(); ++step) {
        uint64_t u = witness[step];
        uint64_t cin = 0;
        for (size_t k = 0; k < spec.uncontrollable.size(); ++k)
            if ((u >> k) & 1)
                cin |= 1ull << ctrl_in.at(spec.circuit.input_names[spec.uncontrollable[k]]);
        StepResult cr = simulate(ctrl, cl, cin);
        uint64_t sin = 0;
        for (size_t k = 0; k < spec.uncontrollable.size(); ++k)
            if ((u >> k) & 1)
                sin |= 1ull << spec.uncontrollable[k];
        for (size_t k = 0; k < spec.controllable.size(); ++k)
            if ((cr.outputs >>
                 ctrl_out.at(spec.circuit.input_names[spec.controllable[k]])) &
                1)
                sin |= 1ull << spec.controllable[k];
        StepResult sr = simulate(spec.circuit, sl, sin);
        bool bad = (sr.outputs & 1) != 0;
        if (bad != (step + 1 == witness.size()))
            return false;
        sl = sr.next_latches;
        cl = cr.next_latches;
    }
    return true;
}

// Drive automaton and controller along the lasso witness; true when the
// cycle closes on itself and its minimal transition priority is odd.
inline bool replay_parity_witness(const ParityAutomaton& aut, const AigCircuit& ctrl,
                                  const VerificationResult& r) {
    if (r.witness.empty() || r.cycle_start >= r.witness.size())
        return false;
    std::map<std::string, size_t> ctrl_in, ctrl_out;
    for (size_t k = 0; k < ctrl.input_names.size(); ++k)
        ctrl_in[ctrl.input_names[k]] = k;
    for (size_t k = 0; k < ctrl.output_names.size(); ++k)
        ctrl_out[ctrl.output_names[k]] = k;
    std::vector<uint32_t> unc = aut.uncontrollable();
    uint64_t cl = 0;
    uint32_t q = aut.initial;
    uint64_t loop_ctrl_latch = 0;
    uint32_t loop_state = 0;
    int min_pri = INT32_MAX;
    for (size_t step = 0; step < r.witness.size(); ++step) {
        if (step == r.cycle_start) {
            loop_ctrl_latch = cl;
            loop_state = q;
        }
        uint64_t u = r.witness[step];
        uint64_t cin = 0;
        for (size_t k = 0; k < unc.size(); ++k)
            if ((u >> k) & 1)
                cin |= 1ull << ctrl_in.at(aut.aps[unc[k]]);
        StepResult cr = simulate(ctrl, cl, cin);
        uint32_t val = 0;
        for (size_t k = 0; k < unc.size(); ++k)
            if ((u >> k) & 1)
                val |= 1u << unc[k];
        for (size_t k = 0; k < aut.controllable.size(); ++k)
            if ((cr.outputs >> ctrl_out.at(aut.aps[aut.controllable[k]])) & 1)
                val |= 1u << aut.controllable[k];
        const Transition* t = matching_transition(aut, q, val);
        if (t == nullptr)
            return false;
        if (step >= r.cycle_start)
            min_pri = std::min(min_pri, t->priority);
        q = t->target;
        cl = cr.next_latches;
    }
    return q == loop_state && cl == loop_ctrl_latch && min_pri % 2 == 1;
}

// ---- circuits ------------------------------------------------------------

inline AigCircuit random_circuit(uint64_t seed, uint32_t inputs, uint32_t latches,
                                 uint32_t gates, uint32_t outputs, bool names) {
    std::mt19937_64 rng(seed * 0x853c49e6748fea9bull + 11);
    auto pick = [&](uint32_t k) { return static_cast<uint32_t>(rng() % k); };
    AigCircuit c;
    std::vector<uint32_t> pool{0};
    for (uint32_t i = 0; i < inputs; ++i) {
        c.inputs.push_back(2 * ++c.max_var);
        c.input_names.push_back(names ? "i" + std::to_string(i) : "");
        pool.push_back(c.inputs.back());
    }
    for (uint32_t i = 0; i < latches; ++i) {
        c.latches.push_back({2 * ++c.max_var, 0});
        c.latch_names.push_back(names ? "l" + std::to_string(i) : "");
        pool.push_back(c.latches.back().lit);
    }
    auto rand_lit = [&] { return pool[pick(static_cast<uint32_t>(pool.size()))] ^ pick(2); };
    for (uint32_t g = 0; g < gates; ++g) {
        uint32_t lhs = 2 * ++c.max_var;
        c.ands.push_back({lhs, rand_lit(), rand_lit()});
        pool.push_back(lhs);
    }
    for (auto& l : c.latches)
        l.next = rand_lit();
    for (uint32_t o = 0; o < outputs; ++o) {
        c.outputs.push_back(rand_lit());
        c.output_names.push_back(names ? "o" + std::to_string(o) : "");
    }
    return c;
}

// ---- misc ----------------------------------------------------------------

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        auto base = std::filesystem::temp_directory_path() / "osyntXXXXXX";
        std::string tmpl = base.string();
        if (mkdtemp(tmpl.data()) == nullptr)
            throw Error("mkdtemp failed");
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

inline std::string cli_path() {
    const char* p = std::getenv("OSYNT_CLI");
    return p == nullptr ? std::string() : std::string(p);
}

}  // namespace testsupport
