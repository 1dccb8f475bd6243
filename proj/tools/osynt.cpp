#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "osynt/aig.hpp"
#include "osynt/arena.hpp"
#include "osynt/bench.hpp"
#include "osynt/errors.hpp"
#include "osynt/hoa.hpp"
#include "osynt/pipeline.hpp"
#include "osynt/synthesis.hpp"
#include "osynt/verify.hpp"

namespace {

using namespace osynt;

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Track detect_track(const std::filesystem::path& p, const std::string& format) {
    if (format == "aag")
        return Track::safety;
    if (format == "ehoa")
        return Track::parity;
    const std::string ext = p.extension().string();
    if (ext == ".aag")
        return Track::safety;
    if (ext == ".ehoa" || ext == ".hoa")
        return Track::parity;
    throw Error("cannot infer the format of " + p.string() +
                "; pass --format ehoa or --format aag");
}

struct Instance {
    Track track;
    ParityAutomaton aut;  // parity
    SafetySpec spec;      // safety
    std::vector<std::string> unc_names;
};

Instance load_instance(const std::filesystem::path& p, const std::string& format) {
    Instance inst;
    inst.track = detect_track(p, format);
    const std::string text = read_file(p);
    if (inst.track == Track::parity) {
        inst.aut = parse_ehoa(text);
        for (uint32_t idx : inst.aut.uncontrollable())
            inst.unc_names.push_back(inst.aut.aps[idx]);
    } else {
        inst.spec = classify_safety_spec(parse_aag(text));
        for (const auto& warning : inst.spec.warnings)
            std::cerr << "warning: " << warning << '\n';
        for (uint32_t idx : inst.spec.uncontrollable)
            inst.unc_names.push_back(inst.spec.circuit.input_names[idx]);
    }
    return inst;
}

int solve_or_synth(const std::filesystem::path& file, const std::string& format,
                   const std::string& solver_name, bool synthesize,
                   const std::string& out_path, bool worker_exit_codes) {
    Instance inst = load_instance(file, format);
    SolverKind solver = solver_kind_from_name(solver_name);
    PipelineResult res = inst.track == Track::parity
                             ? run_parity_pipeline(inst.aut, solver, synthesize)
                             : run_safety_pipeline(inst.spec, synthesize);
    std::cout << (res.realizable ? "REALIZABLE" : "UNREALIZABLE") << '\n';
    if (res.realizable && synthesize && res.controller) {
        const std::string aag = print_aag(*res.controller);
        if (out_path.empty() || out_path == "-") {
            std::cout << aag;
        } else {
            std::ofstream out(out_path);
            if (!out)
                throw Error("cannot write " + out_path);
            out << aag;
        }
    }
    if (worker_exit_codes)
        return 0;
    return res.realizable ? 0 : 1;
}

void print_witness(const VerificationResult& r,
                   const std::vector<std::string>& unc_names, bool lasso) {
    for (size_t t = 0; t < r.witness.size(); ++t) {
        if (lasso && t == r.cycle_start)
            std::cout << "-- cycle --\n";
        std::cout << "step " << t << ':';
        if (unc_names.empty())
            std::cout << " (no inputs)";
        for (size_t j = 0; j < unc_names.size(); ++j)
            std::cout << ' ' << unc_names[j] << '=' << (r.witness[t] >> j & 1);
        std::cout << '\n';
    }
}

uint64_t seed_from_env() {
    const char* s = std::getenv("OMEGA_SYNTH_SEED");
    if (s == nullptr || *s == '\0')
        return 1;
    return std::stoull(s);
}

std::filesystem::path self_executable(const char* argv0) {
    std::error_code ec;
    auto p = std::filesystem::read_symlink("/proc/self/exe", ec);
    if (!ec)
        return p;
    return std::filesystem::absolute(argv0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reactive synthesis from parity automata and safety circuits"};
    app.require_subcommand(1);

    std::string file, format, solver = "dfi", out_path;

    auto* solve = app.add_subcommand("solve", "decide realizability");
    solve->add_option("file", file, "specification (.ehoa or .aag)")->required();
    solve->add_option("--format", format, "ehoa or aag (default: by extension)");
    solve->add_option("--solver", solver, "dfi or zielonka (default dfi)");

    auto* synth = app.add_subcommand("synth", "synthesize an AIGER controller");
    synth->add_option("file", file, "specification (.ehoa or .aag)")->required();
    synth->add_option("--format", format, "ehoa or aag (default: by extension)");
    synth->add_option("--solver", solver, "dfi or zielonka (default dfi)");
    synth->add_option("-o,--out", out_path, "controller file (default: stdout)");

    std::string spec_path, controller_path;
    auto* verify = app.add_subcommand("verify", "model-check a controller");
    verify->add_option("--spec", spec_path, "specification file")->required();
    verify->add_option("--controller", controller_path, "controller .aag")->required();
    verify->add_option("--format", format, "ehoa or aag (default: by extension)");

    auto* worker = app.add_subcommand("worker", "benchmark worker (internal)");
    std::string w_track = "safety", w_mode = "real";
    worker->add_option("file", file)->required();
    worker->add_option("--track", w_track);
    worker->add_option("--mode", w_mode);
    worker->add_option("--solver", solver);

    auto* bench = app.add_subcommand("bench", "benchmark runner");
    bench->require_subcommand(1);

    RunnerConfig rc;
    std::string rc_suite, rc_track = "safety", rc_mode = "real", rc_out, rc_refs;
    std::vector<std::string> rc_tool;
    auto* brun = bench->add_subcommand("run", "run a suite under limits");
    brun->add_option("--suite", rc_suite, "instance directory")->required();
    brun->add_option("--track", rc_track, "safety or parity");
    brun->add_option("--mode", rc_mode, "real or synth");
    brun->add_option("--timeout", rc.wall_limit_s, "wall limit seconds");
    brun->add_option("--cpu-limit", rc.cpu_limit_s, "CPU limit seconds (default 4x wall)");
    brun->add_option("--workers", rc.workers, "concurrent worker processes");
    brun->add_option("--out", rc_out, "report directory")->required();
    brun->add_option("--label", rc.label, "configuration label");
    brun->add_option("--solver", rc.solver, "dfi or zielonka");
    brun->add_option("--tool", rc_tool, "worker command ({instance} placeholder)");
    brun->add_option("--refs", rc_refs, "reference sizes CSV");

    std::vector<std::string> report_in;
    std::string report_out;
    auto* brep = bench->add_subcommand("report", "re-emit reports from scoreboards");
    brep->add_option("--scoreboard", report_in, "scoreboard.csv files")->required();
    brep->add_option("--out", report_out, "report directory")->required();

    std::string g_family = "random", g_out;
    uint32_t g_count = 10, g_size = 8, g_priorities = 3, g_states = 16, g_aps = 4;
    uint32_t g_unc = 2, g_ctrl = 2, g_latches = 2;
    auto* bgen = bench->add_subcommand("gen", "generate arenas or instances");
    bgen->add_option("--family", g_family, "random|ladder|clique|parity|safety");
    bgen->add_option("--count", g_count, "number of files");
    bgen->add_option("--out", g_out, "output directory")->required();
    bgen->add_option("--size", g_size, "arena vertices");
    bgen->add_option("--priorities", g_priorities, "maximum priority");
    bgen->add_option("--states", g_states, "parity: maximum states");
    bgen->add_option("--aps", g_aps, "parity: maximum APs");
    bgen->add_option("--unc", g_unc, "safety: uncontrollable inputs");
    bgen->add_option("--ctrl", g_ctrl, "safety: controllable inputs");
    bgen->add_option("--latches", g_latches, "safety: latches");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return solve_or_synth(file, format, solver, false, "", false);
        if (synth->parsed())
            return solve_or_synth(file, format, solver, true, out_path, false);
        if (worker->parsed())
            return solve_or_synth(file, w_track == "parity" ? "ehoa" : "aag", solver,
                                  w_mode == "synth", "", true);
        if (verify->parsed()) {
            Instance inst = load_instance(spec_path, format);
            AigCircuit controller = parse_aag(read_file(controller_path));
            VerificationResult r = inst.track == Track::parity
                                       ? verify_parity_controller(inst.aut, controller)
                                       : verify_safety_controller(inst.spec, controller);
            if (r.pass) {
                std::cout << "PASS\n";
                return 0;
            }
            std::cout << "FAIL: " << r.reason << '\n';
            print_witness(r, inst.unc_names, inst.track == Track::parity);
            return 1;
        }
        if (brun->parsed()) {
            rc.suite_dir = rc_suite;
            rc.track = rc_track == "parity" ? Track::parity : Track::safety;
            rc.mode = rc_mode == "synth" ? Mode::synthesis : Mode::realizability;
            rc.tool = rc_tool;
            rc.refs_csv = rc_refs;
            rc.worker_exe = self_executable(argv[0]);
            Scoreboard board = run_suite(rc);
            emit_report(board, rc_out);
            uint32_t solved = 0;
            for (const auto& rec : board.records)
                solved += rec.solved() ? 1 : 0;
            std::cout << "solved " << solved << "/" << board.records.size()
                      << ", reports in " << rc_out << '\n';
            return 0;
        }
        if (brep->parsed()) {
            Scoreboard merged;
            for (const auto& f : report_in) {
                Scoreboard b = read_scoreboard_csv(f);
                merged.records.insert(merged.records.end(), b.records.begin(),
                                      b.records.end());
            }
            emit_report(merged, report_out);
            return 0;
        }
        if (bgen->parsed()) {
            std::filesystem::create_directories(g_out);
            uint64_t seed = seed_from_env();
            for (uint32_t i = 0; i < g_count; ++i) {
                std::filesystem::path out_file;
                std::string text;
                if (g_family == "parity") {
                    text = print_ehoa(generate_parity_instance(seed + i, g_states, g_aps));
                    out_file = std::filesystem::path(g_out) /
                               ("parity_" + std::to_string(i) + ".ehoa");
                } else if (g_family == "safety") {
                    text = print_aag(
                        generate_safety_instance(seed + i, g_unc, g_ctrl, g_latches)
                            .circuit);
                    out_file = std::filesystem::path(g_out) /
                               ("safety_" + std::to_string(i) + ".aag");
                } else {
                    ArenaFamily fam = g_family == "ladder"  ? ArenaFamily::ladder
                                      : g_family == "clique" ? ArenaFamily::clique
                                                             : ArenaFamily::random;
                    text = print_pgsolver(generate_arena(fam, seed + i, g_size,
                                                         g_priorities));
                    out_file = std::filesystem::path(g_out) /
                               (g_family + "_" + std::to_string(i) + ".pg");
                }
                std::ofstream out(out_file);
                if (!out)
                    throw Error("cannot write " + out_file.string());
                out << text;
            }
            std::cout << "wrote " << g_count << " files to " << g_out << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
