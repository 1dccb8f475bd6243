#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>

using namespace osynt;
using namespace testsupport;

namespace {

// Run a Mealy machine for one step: find the row matching the input.
std::pair<uint64_t, uint32_t> mealy_step(const MealyMachine& m, uint32_t state,
                                         uint64_t input) {
    for (const MealyTransition& t : m.rows[state])
        if (t.input.matches(static_cast<uint32_t>(input)))
            return {t.output, t.target};
    throw Error("mealy row missing");
}

}  // namespace

TEST_CASE("trivially realizable one-state spec yields a one-state machine") {
    std::string text =
        "HOA: v1\nStates: 1\nStart: 0\nAP: 2 \"u\" \"c\"\ncontrollable-AP: 1\n"
        "Acceptance: 1 Inf(0)\nacc-name: Buchi\n--BODY--\n"
        "State: 0\n[t] 0 {0}\n--END--\n";
    PipelineResult res =
        run_parity_pipeline(parse_ehoa(text), SolverKind::zielonka, true);
    CHECK(res.realizable);
    REQUIRE(res.machine.has_value());
    CHECK(res.machine->num_states == 1);
    CHECK(res.machine->input_bits == 1);
    CHECK(res.machine->output_bits == 1);
    REQUIRE(res.controller.has_value());
    CHECK(res.controller->latches.empty());
}

TEST_CASE("bad = u0 and not c0 machine always cancels") {
    std::string text =
        "aag 4 2 1 1 1\n2\n4\n6 6\n8\n8 2 5\n"
        "i0 u0\ni1 controllable_c0\nl0 st\no0 bad\n";
    SafetySpec spec = classify_safety_spec(parse_aag(text));
    PipelineResult res = run_safety_pipeline(spec, true);
    CHECK(res.realizable);
    REQUIRE(res.machine.has_value());
    const MealyMachine& m = *res.machine;
    // whenever u0 = 1 the machine must emit c0 = 1, in every reachable state
    std::set<uint32_t> reach{0};
    std::vector<uint32_t> queue{0};
    while (!queue.empty()) {
        uint32_t s = queue.back();
        queue.pop_back();
        for (uint64_t in = 0; in < 2; ++in) {
            auto [out, next] = mealy_step(m, s, in);
            if (in == 1)
                CHECK((out & 1) == 1);
            if (reach.insert(next).second)
                queue.push_back(next);
        }
    }
    REQUIRE(res.controller.has_value());
    CHECK(verify_safety_controller(spec, *res.controller).pass);
}

TEST_CASE("unrealizable specs signal instead of building a machine") {
    SafetySpec spec = classify_safety_spec(parse_aag("aag 1 1 0 1 0\n2\n2\ni0 u0\n"));
    PipelineResult res = run_safety_pipeline(spec, false);
    CHECK_FALSE(res.realizable);

    GameArena a = arena_from_safety_spec(spec);
    Solution sol = solve_safety(a, sink_vertices(a));
    CHECK_THROWS_AS(strategy_to_mealy(a, sol), UnrealizableError);
}

TEST_CASE("constant-output machine encodes with zero gates and latches") {
    MealyMachine m;
    m.num_states = 1;
    m.input_bits = 1;
    m.output_bits = 1;
    m.input_names = {"u0"};
    m.output_names = {"c0"};
    m.rows = {{{Cube{}, 1, 0}}};  // always emit 1, stay
    AigCircuit c = mealy_to_aiger(m);
    CHECK(c.latches.empty());
    CHECK(gate_count(c) == 0);
    REQUIRE(c.outputs.size() == 1);
    CHECK(c.outputs[0] == 1);
    CHECK(simulate(c, 0, 0).outputs == 1);
    CHECK(simulate(c, 0, 1).outputs == 1);
}

TEST_CASE("identity copier needs no gates") {
    MealyMachine m;
    m.num_states = 1;
    m.input_bits = 1;
    m.output_bits = 1;
    m.input_names = {"u0"};
    m.output_names = {"c0"};
    m.rows = {{{Cube{1, 0}, 0, 0}, {Cube{1, 1}, 1, 0}}};
    AigCircuit c = mealy_to_aiger(m);
    CHECK(gate_count(c) == 0);
    CHECK(simulate(c, 0, 0).outputs == 0);
    CHECK(simulate(c, 0, 1).outputs == 1);
    CHECK(c.outputs[0] == c.inputs[0]);
}

TEST_CASE("two-state toggle machine gets one latch and co-simulates") {
    MealyMachine m;
    m.num_states = 2;
    m.input_bits = 1;
    m.output_bits = 1;
    m.input_names = {"u0"};
    m.output_names = {"c0"};
    m.rows = {{{Cube{}, 0, 1}}, {{Cube{}, 1, 0}}};  // emit state bit, flip
    AigCircuit c = mealy_to_aiger(m);
    CHECK(c.latches.size() == 1);
    std::mt19937_64 rng(99);
    for (int run = 0; run < 64; ++run) {
        uint64_t latch = 0;
        uint32_t state = 0;
        for (int step = 0; step < 32; ++step) {
            uint64_t in = rng() & 1;
            StepResult r = simulate(c, latch, in);
            auto [want_out, want_next] = mealy_step(m, state, in);
            CHECK(r.outputs == want_out);
            latch = r.next_latches;
            state = want_next;
        }
    }
}

TEST_CASE("machines over several outputs co-simulate after encoding") {
    std::mt19937_64 rng(123);
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        ParityAutomaton aut = generate_parity_instance(seed, 6, 3);
        PipelineResult res = run_parity_pipeline(aut, SolverKind::dfi, true);
        if (!res.realizable)
            continue;
        const MealyMachine& m = *res.machine;
        const AigCircuit& c = *res.controller;
        REQUIRE(c.inputs.size() == m.input_bits);
        REQUIRE(c.outputs.size() == m.output_bits);
        for (int run = 0; run < 16; ++run) {
            uint64_t latch = 0;
            uint32_t state = 0;
            for (int step = 0; step < 32; ++step) {
                uint64_t in = rng() & ((1ull << m.input_bits) - 1);
                StepResult r = simulate(c, latch, in);
                auto [want_out, want_next] = mealy_step(m, state, in);
                CHECK(r.outputs == want_out);
                latch = r.next_latches;
                state = want_next;
            }
        }
    }
}

TEST_CASE("gate_count matches the printed header field") {
    AigCircuit c = parse_aag("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n");
    CHECK(gate_count(c) == 1);
    CHECK(gate_count(parse_aag("aag 0 0 0 1 0\n0\n")) == 0);
    std::string printed = print_aag(c);
    // header: aag M I L O A
    unsigned m, i, l, o, a;
    REQUIRE(std::sscanf(printed.c_str(), "aag %u %u %u %u %u", &m, &i, &l, &o, &a) == 5);
    CHECK(a == gate_count(c));
}

TEST_CASE("quality scoring") {
    CHECK(quality_score(0, 0) == doctest::Approx(2.0));
    CHECK(quality_score(42, 42) == doctest::Approx(2.0));
    CHECK(quality_score(9, 99) == doctest::Approx(3.0));
    CHECK(quality_score(99, 9) == doctest::Approx(1.0));
    // clamp: 100x the reference (and beyond) scores 0
    CHECK(quality_score(999, 9) == doctest::Approx(0.0));
    CHECK(quality_score(100000, 9) == 0.0);
    // monotone non-increasing in size
    for (uint64_t ref : {0ull, 5ull, 50ull}) {
        double prev = quality_score(0, ref);
        for (uint64_t size = 1; size <= 200; ++size) {
            double q = quality_score(size, ref);
            CHECK(q <= prev + 1e-12);
            prev = q;
        }
    }
}
