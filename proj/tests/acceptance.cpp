// Acceptance gate: one line per criterion, PASS/FAIL, nonzero exit on any
// failure. Each criterion is self-contained and uses independent oracles
// (brute-force enumeration, naive fixpoints, direct simulation).
#include "support.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace osynt;
using namespace testsupport;

namespace {

int g_failures = 0;

void expect(bool cond, const std::string& what) {
    if (!cond)
        throw Error(what);
}

void criterion(const std::string& name, const std::function<void()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string note;
    bool ok = true;
    try {
        body();
    } catch (const std::exception& e) {
        ok = false;
        note = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << "ACCEPTANCE " << name << ": " << (ok ? "PASS" : "FAIL");
    line.setf(std::ios::fixed);
    line.precision(1);
    line << " (" << secs << "s)";
    if (!ok) {
        line << " -- " << note;
        ++g_failures;
    }
    std::cout << line.str() << std::endl;
}

GameArena random_small_arena(uint64_t seed) {
    return generate_arena(ArenaFamily::random, seed, 1 + seed % 12, seed % 4 + 1);
}

// --------------------------------------------------------------- criteria

void solver_oracle_equivalence() {
    const int kArenas = 10000;
    for (uint64_t seed = 1; seed <= kArenas; ++seed) {
        GameArena a = random_small_arena(seed);
        auto brute = brute_force_solve(a);
        Solution z = solve_parity_zielonka(a);
        Solution d = solve_parity_dfi(a);
        expect(z.winner == brute, "zielonka disagrees with brute force at seed " +
                                      std::to_string(seed));
        expect(d.winner == brute,
               "dfi disagrees with brute force at seed " + std::to_string(seed));
    }
}

void determinacy() {
    auto check_partition = [](const GameArena& a, const Solution& sol,
                              const std::string& where) {
        expect(sol.winner.size() == a.size(), "winner map not total in " + where);
        check_solution(a, sol);  // region closure + strategy validity
        size_t eve = 0, adam = 0;
        for (Player p : sol.winner)
            (p == Player::eve ? eve : adam) += 1;
        expect(eve + adam == a.size(), "regions do not partition in " + where);
    };
    for (uint64_t seed = 1; seed <= 10000; ++seed) {
        GameArena a = random_small_arena(seed);
        check_partition(a, solve_parity_zielonka(a), "random arena " + std::to_string(seed));
        check_partition(a, solve_parity_dfi(a), "random arena " + std::to_string(seed));
    }
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        for (ArenaFamily fam : {ArenaFamily::ladder, ArenaFamily::clique}) {
            GameArena a = generate_arena(fam, seed, 1 + seed % 14, 1 + seed % 4);
            check_partition(a, solve_parity_zielonka(a), "structured arena");
            check_partition(a, solve_parity_dfi(a), "structured arena");
        }
        SafetySpec spec = generate_safety_instance(seed, 2, 2, 2);
        GameArena sa = arena_from_safety_spec(spec);
        check_partition(sa, solve_safety(sa, sink_vertices(sa)), "safety arena");
        ParityAutomaton aut = generate_parity_instance(seed, 5, 3);
        GameArena pa = arena_from_parity_automaton(normalize_acceptance(aut));
        check_partition(pa, solve_parity_zielonka(pa), "parity arena");
    }
}

void end_to_end_synthesize_then_verify() {
    int safety_total = 0, parity_total = 0, confirmed_unreal = 0;
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        SafetySpec spec =
            generate_safety_instance(seed, 2 + seed % 2, 2, 2 + seed % 3);
        expect(spec.circuit.latches.size() <= 20, "safety instance exceeds 20 latches");
        PipelineResult res = run_safety_pipeline(spec, true);
        ++safety_total;
        if (res.realizable) {
            VerificationResult v = verify_safety_controller(spec, *res.controller);
            expect(v.pass, "synthesized safety controller failed verification at seed " +
                               std::to_string(seed) + ": " + v.reason);
        } else {
            GameArena a = arena_from_safety_spec(spec);
            bool within = a.size() <= 12;
            for (uint32_t v = 0; within && v < a.size(); ++v)
                within = a.succ[v].size() <= 4;
            if (within) {
                expect(brute_force_solve(a)[a.initial] == Player::adam,
                       "brute force contradicts UNREALIZABLE at safety seed " +
                           std::to_string(seed));
                ++confirmed_unreal;
            }
        }
    }
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        ParityAutomaton aut = generate_parity_instance(seed, 12, 4);
        expect(aut.aps.size() <= 8, "parity instance exceeds 8 APs");
        expect(aut.num_states <= 64, "parity instance exceeds 64 states");
        SolverKind kind = seed % 2 ? SolverKind::dfi : SolverKind::zielonka;
        PipelineResult res = run_parity_pipeline(aut, kind, true);
        ++parity_total;
        ParityAutomaton norm = normalize_acceptance(aut);
        if (res.realizable) {
            VerificationResult v = verify_parity_controller(norm, *res.controller);
            expect(v.pass, "synthesized parity controller failed verification at seed " +
                               std::to_string(seed) + ": " + v.reason);
        } else {
            GameArena a = arena_from_parity_automaton(norm);
            bool within = a.size() <= 12;
            for (uint32_t v = 0; within && v < a.size(); ++v)
                within = a.succ[v].size() <= 4;
            if (within) {
                expect(brute_force_solve(a)[a.initial] == Player::adam,
                       "brute force contradicts UNREALIZABLE at parity seed " +
                           std::to_string(seed));
                ++confirmed_unreal;
            }
        }
    }
    expect(safety_total >= 50 && parity_total >= 50, "suite too small");
}

void mutation_detection() {
    int detected = 0;
    // 12 safety instances: bad = u0 & !c0 with varying latch padding and
    // extra environment inputs; c0 is semantically constrained whenever
    // u0 = 1, so negating the controller's c0 output must be caught.
    for (int variant = 0; variant < 12; ++variant) {
        int latches = variant % 4;
        int extra_unc = variant / 4;  // 0..2
        std::ostringstream aag;
        int inputs = 2 + extra_unc;
        int max_var = inputs + latches + 1;
        aag << "aag " << max_var << " " << inputs << " " << latches << " 1 1\n";
        for (int i = 0; i < inputs; ++i)
            aag << 2 * (i + 1) << "\n";
        for (int l = 0; l < latches; ++l) {
            int lit = 2 * (inputs + l + 1);
            aag << lit << " " << lit << "\n";  // latch holds its value
        }
        int gate = 2 * (inputs + latches + 1);
        aag << gate << "\n";
        aag << gate << " 2 " << 2 * 2 + 1 << "\n";  // u0 & !c0
        aag << "i0 u0\ni1 controllable_c0\n";
        for (int i = 0; i < extra_unc; ++i)
            aag << "i" << 2 + i << " u" << 1 + i << "\n";
        for (int l = 0; l < latches; ++l)
            aag << "l" << l << " mem" << l << "\n";
        aag << "o0 bad\n";
        SafetySpec spec = classify_safety_spec(parse_aag(aag.str()));
        PipelineResult res = run_safety_pipeline(spec, true);
        expect(res.realizable, "mutation family instance must be realizable");
        expect(verify_safety_controller(spec, *res.controller).pass,
               "unmutated controller must pass");
        AigCircuit mutant = *res.controller;
        mutant.outputs[0] ^= 1;
        VerificationResult v = verify_safety_controller(spec, mutant);
        expect(!v.pass, "safety mutant escaped detection (variant " +
                            std::to_string(variant) + ")");
        expect(replay_safety_witness(spec, mutant, v.witness),
               "safety witness did not replay (variant " + std::to_string(variant) + ")");
        ++detected;
    }
    // 8 parity instances: a steering chain where emitting c = 1 forever is
    // the only winning behavior; the flipped output falls onto an odd loop.
    for (int k = 1; k <= 8; ++k) {
        std::ostringstream hoa;
        hoa << "HOA: v1\nStates: " << k + 1 << "\nStart: 0\nAP: 2 \"u\" \"c\"\n"
            << "controllable-AP: 1\nAcceptance: 2 Inf(0) | Fin(1)\n"
            << "acc-name: parity min even 2\n--BODY--\n";
        for (int j = 0; j < k; ++j)
            hoa << "State: " << j << "\n[1] " << j + 1 << " {1}\n[!1] 0 {1}\n";
        hoa << "State: " << k << "\n[1] " << k << " {0}\n[!1] 0 {1}\n--END--\n";
        ParityAutomaton aut = normalize_acceptance(parse_ehoa(hoa.str()));
        PipelineResult res = run_parity_pipeline(aut, SolverKind::zielonka, true);
        expect(res.realizable, "steering chain must be realizable");
        expect(verify_parity_controller(aut, *res.controller).pass,
               "unmutated parity controller must pass");
        AigCircuit mutant = *res.controller;
        mutant.outputs[0] ^= 1;
        VerificationResult v = verify_parity_controller(aut, mutant);
        expect(!v.pass,
               "parity mutant escaped detection (chain " + std::to_string(k) + ")");
        expect(replay_parity_witness(aut, mutant, v),
               "parity witness did not replay (chain " + std::to_string(k) + ")");
        ++detected;
    }
    expect(detected >= 20, "fewer than 20 mutation instances");
}

void quality_anchor() {
    expect(quality_score(0, 0) == 2.0, "anchor at size 0 is not exactly 2");
    expect(quality_score(42, 42) == 2.0, "anchor at size 42 is not exactly 2");
    expect(quality_score(12345, 12345) == 2.0, "anchor at size 12345 is not exactly 2");
    const uint64_t grid[10] = {0, 1, 2, 5, 10, 20, 50, 100, 500, 1000};
    int pairs = 0;
    for (uint64_t ref : grid) {
        double prev = -1;
        for (uint64_t size : grid) {
            double q = quality_score(size, ref);
            expect(q >= 0.0, "score went negative");
            if (prev >= 0)
                expect(q <= prev + 1e-12, "score not non-increasing in size");
            prev = q;
            ++pairs;
        }
    }
    for (uint64_t size : grid) {
        double prev = -1;
        for (uint64_t ref : grid) {
            double q = quality_score(size, ref);
            if (prev >= 0)
                expect(q + 1e-12 >= prev, "score not non-decreasing in reference");
            prev = q;
        }
    }
    expect(pairs == 100, "grid must cover 100 pairs");
}

void timeout_rule() {
    expect(kDefaultWallLimitSeconds == 3600.0, "default wall limit is not 3600 s");
    expect(kAltWallLimitSeconds == 10000.0, "alternate wall limit is not 10000 s");
    expect(kAltCpuLimitSeconds == 40000.0, "alternate cpu limit is not 40000 s");
    TempDir tmp;
    auto suite = tmp.path / "suite";
    std::filesystem::create_directory(suite);
    write_file(suite / "stub.aag", "aag 0 0 0 1 0\n0\n");
    RunnerConfig cfg;
    cfg.suite_dir = suite;
    cfg.track = Track::safety;
    cfg.mode = Mode::realizability;
    cfg.wall_limit_s = 2;
    cfg.tool = {"/bin/sh", "-c", "sleep 30; echo REALIZABLE"};
    Scoreboard board = run_suite(cfg);
    expect(board.records.size() == 1, "stub suite must yield one record");
    const RunRecord& r = board.records[0];
    expect(r.verdict == BenchVerdict::timeout, "stub was not recorded TIMEOUT");
    expect(r.wall_s >= 2.0, "TIMEOUT with wall below the limit");
    expect(r.wall_s <= 7.0, "kill exceeded the 5 s grace period");
    expect(!r.solved(), "TIMEOUT counted as solved");
    auto totals = aggregate(board);
    expect(totals.size() == 1 && totals[0].solved == 0,
           "TIMEOUT leaked into the solved count");
}

void format_round_trips() {
    for (uint64_t seed = 1; seed <= 1000; ++seed) {
        ParityAutomaton a = random_automaton(seed, 6, 4, true);
        ParityAutomaton b = parse_ehoa(print_ehoa(a));
        expect(isomorphic(a, b), "automaton round-trip failed at seed " +
                                     std::to_string(seed));
    }
    std::mt19937_64 rng(424242);
    for (uint64_t seed = 1; seed <= 1000; ++seed) {
        AigCircuit a = random_circuit(seed, 1 + seed % 4, seed % 3, 1 + seed % 7,
                                      1 + seed % 2, seed % 2 == 0);
        AigCircuit b = parse_aag(print_aag(a));
        expect(b.inputs.size() == a.inputs.size() && b.latches.size() == a.latches.size() &&
                   b.ands.size() == a.ands.size() && b.outputs.size() == a.outputs.size(),
               "circuit structure changed in round-trip at seed " + std::to_string(seed));
        for (int run = 0; run < 8; ++run) {
            uint64_t la = 0, lb = 0;
            for (int step = 0; step < 16; ++step) {
                uint64_t in = rng() & ((1ull << a.inputs.size()) - 1);
                StepResult ra = simulate(a, la, in);
                StepResult rb = simulate(b, lb, in);
                expect(ra.outputs == rb.outputs && ra.next_latches == rb.next_latches,
                       "circuit round-trip diverged at seed " + std::to_string(seed));
                la = ra.next_latches;
                lb = rb.next_latches;
            }
        }
    }
}

void normalization_soundness() {
    std::mt19937_64 rng(777);
    for (uint64_t seed = 1; seed <= 500; ++seed) {
        ParityAutomaton orig = random_automaton(seed, 4, 3, true);
        ParityAutomaton norm = normalize_acceptance(orig);
        uint32_t naps = static_cast<uint32_t>(orig.aps.size());
        for (int trial = 0; trial < 100; ++trial) {
            uint32_t ulen = static_cast<uint32_t>(rng() % 7);
            uint32_t vlen = 1 + static_cast<uint32_t>(rng() % 6);
            std::vector<uint32_t> u, v;
            for (uint32_t i = 0; i < ulen; ++i)
                u.push_back(static_cast<uint32_t>(rng()) & ((1u << naps) - 1));
            for (uint32_t i = 0; i < vlen; ++i)
                v.push_back(static_cast<uint32_t>(rng()) & ((1u << naps) - 1));
            bool before = lasso_accepted(orig, u, v);
            bool after = lasso_accepted_min_even(norm, u, v);
            expect(before == after,
                   "normalization changed acceptance at seed " + std::to_string(seed));
        }
    }
}

void cactus_data_integrity() {
    std::mt19937_64 rng(90210);
    for (int iter = 0; iter < 50; ++iter) {
        Scoreboard board;
        int n = 1 + static_cast<int>(rng() % 30);
        for (int k = 0; k < n; ++k) {
            RunRecord r;
            r.config = rng() % 2 ? "alpha" : "beta";
            r.instance = "i" + std::to_string(k);
            r.track = rng() % 2 ? Track::safety : Track::parity;
            bool synth = rng() % 2 == 0;
            r.mode = synth ? Mode::synthesis : Mode::realizability;
            switch (rng() % 4) {
                case 0: r.verdict = BenchVerdict::timeout; break;
                case 1: r.verdict = BenchVerdict::error; break;
                default: r.verdict = BenchVerdict::realizable; break;
            }
            r.wall_s = static_cast<double>(rng() % 1000) / 10.0;
            r.cpu_s = r.wall_s;
            if (synth && r.verdict == BenchVerdict::realizable) {
                r.gates = rng() % 100;
                r.verified = Verified::pass;
                r.quality = 2.0;
            }
            board.records.push_back(r);
        }
        TempDir tmp;
        emit_report(board, tmp.path);
        for (const char* name : {"cactus_time.csv", "cactus_size.csv"}) {
            std::ifstream in(tmp.path / name);
            std::string line;
            expect(static_cast<bool>(std::getline(in, line)), "missing cactus header");
            std::map<std::string, std::pair<long, double>> last;
            while (std::getline(in, line)) {
                std::stringstream ss(line);
                std::string config, solved_s, cum_s;
                expect(static_cast<bool>(std::getline(ss, config, ',')), "bad cactus row");
                expect(static_cast<bool>(std::getline(ss, solved_s, ',')), "bad cactus row");
                expect(static_cast<bool>(std::getline(ss, cum_s, ',')), "bad cactus row");
                long solved = std::stol(solved_s);
                double cum = std::stod(cum_s);
                auto it = last.find(config);
                if (it != last.end()) {
                    expect(solved == it->second.first + 1, "cactus series not sorted");
                    expect(cum >= it->second.second - 1e-9, "cactus series not monotone");
                }
                last[config] = {solved, cum};
            }
        }
    }
}

}  // namespace

int main() {
    criterion("solver-oracle-equivalence", solver_oracle_equivalence);
    criterion("determinacy", determinacy);
    criterion("end-to-end-synthesize-then-verify", end_to_end_synthesize_then_verify);
    criterion("mutation-detection", mutation_detection);
    criterion("quality-anchor", quality_anchor);
    criterion("timeout-rule", timeout_rule);
    criterion("format-round-trips", format_round_trips);
    criterion("acceptance-normalization-soundness", normalization_soundness);
    criterion("cactus-data-integrity", cactus_data_integrity);
    if (g_failures != 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
