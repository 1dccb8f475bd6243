#include "osynt/pipeline.hpp"

#include "osynt/arena.hpp"
#include "osynt/errors.hpp"
#include "osynt/solver.hpp"

namespace osynt {

SolverKind solver_kind_from_name(const std::string& name) {
    if (name == "dfi")
        return SolverKind::dfi;
    if (name == "zielonka")
        return SolverKind::zielonka;
    throw Error("unknown solver \"" + name + "\" (expected dfi or zielonka)");
}

namespace {

PipelineResult finish(const GameArena& arena, const Solution& solution,
                      bool synthesize) {
    PipelineResult r;
    r.realizable = solution.winner_at(arena.initial) == Player::eve;
    if (r.realizable && synthesize) {
        r.machine = strategy_to_mealy(arena, solution);
        r.controller = mealy_to_aiger(*r.machine);
    }
    return r;
}

}  // namespace

PipelineResult run_parity_pipeline(const ParityAutomaton& aut, SolverKind solver,
                                   bool synthesize) {
    ParityAutomaton normal = aut.normalized ? aut : normalize_acceptance(aut);
    GameArena arena = arena_from_parity_automaton(normal);
    Solution solution = solver == SolverKind::dfi ? solve_parity_dfi(arena)
                                                  : solve_parity_zielonka(arena);
    return finish(arena, solution, synthesize);
}

PipelineResult run_safety_pipeline(const SafetySpec& spec, bool synthesize) {
    GameArena arena = arena_from_safety_spec(spec);
    Solution solution = solve_safety(arena, sink_vertices(arena));
    return finish(arena, solution, synthesize);
}

}  // namespace osynt
