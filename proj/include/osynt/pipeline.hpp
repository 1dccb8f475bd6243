#pragma once

#include <optional>
#include <string>

#include "osynt/aig.hpp"
#include "osynt/hoa.hpp"
#include "osynt/synthesis.hpp"

namespace osynt {

enum class SolverKind { dfi, zielonka };

SolverKind solver_kind_from_name(const std::string& name);

struct PipelineResult {
    bool realizable = false;
    std::optional<MealyMachine> machine;     // synthesis of a realizable spec
    std::optional<AigCircuit> controller;
};

/// normalize -> game arena -> parity solver -> (optional) strategy
/// extraction and circuit encoding.
PipelineResult run_parity_pipeline(const ParityAutomaton& aut, SolverKind solver,
                                   bool synthesize);

/// reachable latch game -> safety fixpoint -> (optional) extraction/encoding.
PipelineResult run_safety_pipeline(const SafetySpec& spec, bool synthesize);

}  // namespace osynt
