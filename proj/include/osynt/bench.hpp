#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "osynt/arena.hpp"
#include "osynt/hoa.hpp"

namespace osynt {

// Competition limits: the default wall budget per instance, and the
// alternative profile of 10000 s wall clock with 4x that in CPU time.
inline constexpr double kDefaultWallLimitSeconds = 3600.0;
inline constexpr double kAltWallLimitSeconds = 10000.0;
inline constexpr double kAltCpuLimitSeconds = 40000.0;

enum class Track { safety, parity };
enum class Mode { realizability, synthesis };
enum class BenchVerdict { realizable, unrealizable, timeout, error };
enum class Verified { pass, fail, na };

std::string to_string(Track t);
std::string to_string(Mode m);
std::string to_string(BenchVerdict v);
std::string to_string(Verified v);

struct RunRecord {
    std::string config;
    std::string instance;
    Track track = Track::safety;
    Mode mode = Mode::realizability;
    BenchVerdict verdict = BenchVerdict::error;
    double wall_s = 0.0;
    double cpu_s = 0.0;
    std::optional<uint64_t> gates;    // synthesized circuit size
    Verified verified = Verified::na;
    std::optional<double> quality;    // present only when verified = PASS

    // Counts toward the solved ranking: a definite verdict whose synthesis
    // output (if any) passed independent verification.
    bool solved() const;
};

struct Scoreboard {
    std::vector<RunRecord> records;
};

struct ConfigTotals {
    std::string config;
    uint32_t solved = 0;
    double quality = 0.0;
    double wall_s = 0.0;
};

std::vector<ConfigTotals> aggregate(const Scoreboard& board);

struct Ranking {
    std::vector<ConfigTotals> by_solved;   // solved desc, wall asc
    std::vector<ConfigTotals> by_quality;  // quality desc, wall asc
};

Ranking rank(const Scoreboard& board);

struct RunnerConfig {
    std::filesystem::path suite_dir;
    Track track = Track::safety;
    Mode mode = Mode::realizability;
    double wall_limit_s = kDefaultWallLimitSeconds;
    double cpu_limit_s = 0.0;  // <= 0: 4x the wall limit
    unsigned workers = 1;
    std::string label = "default";
    std::string solver = "dfi";
    // Worker command template; {instance} is replaced by the file path.
    // Empty: run `worker_exe worker ...` on this toolkit's own pipeline.
    std::vector<std::string> tool;
    std::filesystem::path worker_exe;
    std::filesystem::path refs_csv;  // empty: suite_dir/refs.csv when present
};

/// Run every .aag/.ehoa instance of the suite in its own worker process
/// under the configured wall/CPU limits; parse the verdict from the worker's
/// standard output and, in synthesis mode, verify the controller before
/// scoring. Worker crashes and malformed instances yield ERROR records.
Scoreboard run_suite(const RunnerConfig& config);

/// scoreboard.csv, cactus_time.csv, cactus_size.csv and ranking.md.
void emit_report(const Scoreboard& board, const std::filesystem::path& out_dir);

void write_scoreboard_csv(const Scoreboard& board, const std::filesystem::path& file);
Scoreboard read_scoreboard_csv(const std::filesystem::path& file);

/// Reference circuit sizes for quality scoring: `instance,ref_gates` rows.
/// A missing instance scores against its own size (2 points).
std::vector<std::pair<std::string, uint64_t>> read_refs_csv(
    const std::filesystem::path& file);

enum class ArenaFamily { random, ladder, clique };

/// Seeded, reproducible parity arenas: `random` draws owners, priorities in
/// [0, d] and 1-3 successors uniformly; `ladder` is an alternating chain
/// that stresses recursive solvers; `clique` is a complete graph with mixed
/// priorities.
GameArena generate_arena(ArenaFamily family, uint64_t seed, uint32_t n, uint32_t d);

/// Seeded deterministic, complete parity automaton with up to `max_states`
/// states, up to `max_aps` APs (random controllable subset) and a random
/// acceptance descriptor; some transitions are left colorless.
ParityAutomaton generate_parity_instance(uint64_t seed, uint32_t max_states,
                                         uint32_t max_aps);

/// Seeded safety circuit with `unc` environment inputs, `ctrl` system
/// inputs (named controllable_*), `latches` latches and a random bad cone.
SafetySpec generate_safety_instance(uint64_t seed, uint32_t unc, uint32_t ctrl,
                                    uint32_t latches);

}  // namespace osynt
