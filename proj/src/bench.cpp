#include "osynt/bench.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "osynt/errors.hpp"
#include "osynt/synthesis.hpp"
#include "osynt/verify.hpp"

namespace osynt {

std::string to_string(Track t) {
    return t == Track::safety ? "safety" : "parity";
}

std::string to_string(Mode m) {
    return m == Mode::realizability ? "real" : "synth";
}

std::string to_string(BenchVerdict v) {
    switch (v) {
        case BenchVerdict::realizable: return "REALIZABLE";
        case BenchVerdict::unrealizable: return "UNREALIZABLE";
        case BenchVerdict::timeout: return "TIMEOUT";
        case BenchVerdict::error: return "ERROR";
    }
    return "ERROR";
}

std::string to_string(Verified v) {
    switch (v) {
        case Verified::pass: return "PASS";
        case Verified::fail: return "FAIL";
        case Verified::na: return "N/A";
    }
    return "N/A";
}

namespace {

Track track_from(const std::string& s) {
    if (s == "safety")
        return Track::safety;
    if (s == "parity")
        return Track::parity;
    throw Error("unknown track \"" + s + "\"");
}

Mode mode_from(const std::string& s) {
    if (s == "real" || s == "realizability")
        return Mode::realizability;
    if (s == "synth" || s == "synthesis")
        return Mode::synthesis;
    throw Error("unknown mode \"" + s + "\"");
}

BenchVerdict verdict_from(const std::string& s) {
    if (s == "REALIZABLE")
        return BenchVerdict::realizable;
    if (s == "UNREALIZABLE")
        return BenchVerdict::unrealizable;
    if (s == "TIMEOUT")
        return BenchVerdict::timeout;
    if (s == "ERROR")
        return BenchVerdict::error;
    throw Error("unknown verdict \"" + s + "\"");
}

Verified verified_from(const std::string& s) {
    if (s == "PASS")
        return Verified::pass;
    if (s == "FAIL")
        return Verified::fail;
    if (s == "N/A")
        return Verified::na;
    throw Error("unknown verification state \"" + s + "\"");
}

std::string fmt(double x) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

bool RunRecord::solved() const {
    if (verdict != BenchVerdict::realizable && verdict != BenchVerdict::unrealizable)
        return false;
    return mode == Mode::realizability || verified == Verified::pass;
}

std::vector<ConfigTotals> aggregate(const Scoreboard& board) {
    std::vector<ConfigTotals> out;
    std::unordered_map<std::string, size_t> at;
    for (const auto& r : board.records) {
        auto [it, fresh] = at.emplace(r.config, out.size());
        if (fresh)
            out.push_back({r.config, 0, 0.0, 0.0});
        ConfigTotals& t = out[it->second];
        t.wall_s += r.wall_s;
        if (r.solved()) {
            ++t.solved;
            if (r.verified == Verified::pass && r.quality)
                t.quality += *r.quality;
        }
    }
    return out;
}

Ranking rank(const Scoreboard& board) {
    Ranking r;
    r.by_solved = aggregate(board);
    r.by_quality = r.by_solved;
    std::stable_sort(r.by_solved.begin(), r.by_solved.end(),
                     [](const ConfigTotals& a, const ConfigTotals& b) {
                         if (a.solved != b.solved)
                             return a.solved > b.solved;
                         return a.wall_s < b.wall_s;
                     });
    std::stable_sort(r.by_quality.begin(), r.by_quality.end(),
                     [](const ConfigTotals& a, const ConfigTotals& b) {
                         if (a.quality != b.quality)
                             return a.quality > b.quality;
                         return a.wall_s < b.wall_s;
                     });
    return r;
}

void write_scoreboard_csv(const Scoreboard& board, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out)
        throw Error("cannot write " + file.string());
    out << "config,instance,track,mode,verdict,wall_s,cpu_s,gates,verified,quality\n";
    for (const auto& r : board.records) {
        out << r.config << ',' << r.instance << ',' << to_string(r.track) << ','
            << to_string(r.mode) << ',' << to_string(r.verdict) << ','
            << fmt(r.wall_s) << ',' << fmt(r.cpu_s) << ','
            << (r.gates ? std::to_string(*r.gates) : std::string()) << ','
            << to_string(r.verified) << ','
            << (r.quality ? fmt(*r.quality) : std::string()) << '\n';
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

Scoreboard read_scoreboard_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw Error("cannot read " + file.string());
    Scoreboard board;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty())
            continue;
        auto f = split_csv(line);
        if (f.size() != 10)
            throw Error("malformed scoreboard row: " + line);
        RunRecord r;
        r.config = f[0];
        r.instance = f[1];
        r.track = track_from(f[2]);
        r.mode = mode_from(f[3]);
        r.verdict = verdict_from(f[4]);
        r.wall_s = std::stod(f[5]);
        r.cpu_s = std::stod(f[6]);
        if (!f[7].empty())
            r.gates = std::stoull(f[7]);
        r.verified = verified_from(f[8]);
        if (!f[9].empty())
            r.quality = std::stod(f[9]);
        board.records.push_back(std::move(r));
    }
    return board;
}

std::vector<std::pair<std::string, uint64_t>> read_refs_csv(
    const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw Error("cannot read " + file.string());
    std::vector<std::pair<std::string, uint64_t>> refs;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line == "instance,ref_gates")
            continue;
        auto f = split_csv(line);
        if (f.size() != 2)
            throw Error("malformed reference row: " + line);
        refs.emplace_back(f[0], std::stoull(f[1]));
    }
    return refs;
}

void emit_report(const Scoreboard& board, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_scoreboard_csv(board, out_dir / "scoreboard.csv");

    std::vector<std::string> configs;
    for (const auto& t : aggregate(board))
        configs.push_back(t.config);

    {
        std::ofstream out(out_dir / "cactus_time.csv");
        out << "config,solved,cum_wall_s\n";
        for (const auto& cfg : configs) {
            std::vector<double> walls;
            for (const auto& r : board.records)
                if (r.config == cfg && r.solved())
                    walls.push_back(r.wall_s);
            std::sort(walls.begin(), walls.end());
            double cum = 0.0;
            for (size_t i = 0; i < walls.size(); ++i) {
                cum += walls[i];
                out << cfg << ',' << i + 1 << ',' << fmt(cum) << '\n';
            }
        }
    }
    {
        std::ofstream out(out_dir / "cactus_size.csv");
        out << "config,solved,cum_gates\n";
        for (const auto& cfg : configs) {
            std::vector<uint64_t> sizes;
            for (const auto& r : board.records)
                if (r.config == cfg && r.solved() && r.gates)
                    sizes.push_back(*r.gates);
            std::sort(sizes.begin(), sizes.end());
            uint64_t cum = 0;
            for (size_t i = 0; i < sizes.size(); ++i) {
                cum += sizes[i];
                out << cfg << ',' << i + 1 << ',' << cum << '\n';
            }
        }
    }
    {
        Ranking ranking = rank(board);
        std::ofstream out(out_dir / "ranking.md");
        out << "# Rankings\n\n## Solved instances\n\n"
            << "| rank | config | solved | quality | wall time (s) |\n"
            << "|------|--------|--------|---------|---------------|\n";
        for (size_t i = 0; i < ranking.by_solved.size(); ++i) {
            const auto& t = ranking.by_solved[i];
            out << "| " << i + 1 << " | " << t.config << " | " << t.solved << " | "
                << fmt(t.quality) << " | " << fmt(t.wall_s) << " |\n";
        }
        out << "\n## Quality\n\n"
            << "| rank | config | quality | solved | wall time (s) |\n"
            << "|------|--------|---------|--------|---------------|\n";
        for (size_t i = 0; i < ranking.by_quality.size(); ++i) {
            const auto& t = ranking.by_quality[i];
            out << "| " << i + 1 << " | " << t.config << " | " << fmt(t.quality)
                << " | " << t.solved << " | " << fmt(t.wall_s) << " |\n";
        }
    }
}

namespace {

struct Worker {
    pid_t pid = -1;
    int fd = -1;
    size_t slot = 0;
    std::chrono::steady_clock::time_point start;
    std::string out;
    bool killed = false;
    bool eof = false;
};

std::vector<std::string> worker_argv(const RunnerConfig& cfg,
                                     const std::string& instance) {
    std::vector<std::string> argv;
    if (cfg.tool.empty()) {
        if (cfg.worker_exe.empty())
            throw Error("no worker tool configured");
        argv = {cfg.worker_exe.string(), "worker",       "--track",
                to_string(cfg.track),    "--mode",       to_string(cfg.mode),
                "--solver",              cfg.solver,     instance};
    } else {
        for (std::string arg : cfg.tool) {
            size_t at;
            while ((at = arg.find("{instance}")) != std::string::npos)
                arg.replace(at, 10, instance);
            argv.push_back(std::move(arg));
        }
    }
    return argv;
}

Worker spawn(const RunnerConfig& cfg, const std::string& instance, size_t slot) {
    std::vector<std::string> argv = worker_argv(cfg, instance);

    int fds[2];
    if (pipe(fds) != 0)
        throw Error("pipe failed: " + std::string(std::strerror(errno)));

    double cpu = cfg.cpu_limit_s > 0 ? cfg.cpu_limit_s : 4.0 * cfg.wall_limit_s;
    // Stamp before fork: the child may run (and even exit) before fork
    // returns in the parent, which would otherwise undercount wall time.
    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0)
        throw Error("fork failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        dup2(fds[1], STDOUT_FILENO);
        close(fds[0]);
        close(fds[1]);
        int devnull = open("/dev/null", O_WRONLY);
        if (devnull >= 0) {
            dup2(devnull, STDERR_FILENO);
            close(devnull);
        }
        rlimit rl;
        rl.rlim_cur = static_cast<rlim_t>(std::ceil(cpu));
        rl.rlim_max = rl.rlim_cur + 1;
        setrlimit(RLIMIT_CPU, &rl);
        std::vector<char*> cargv;
        for (auto& a : argv)
            cargv.push_back(a.data());
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    close(fds[1]);
    fcntl(fds[0], F_SETFL, O_NONBLOCK);
    Worker w;
    w.pid = pid;
    w.fd = fds[0];
    w.slot = slot;
    w.start = start;
    return w;
}

void drain(Worker& w) {
    if (w.eof)
        return;
    char buf[65536];
    for (;;) {
        ssize_t n = read(w.fd, buf, sizeof buf);
        if (n > 0) {
            if (w.out.size() < (64u << 20))
                w.out.append(buf, static_cast<size_t>(n));
        } else if (n == 0) {
            w.eof = true;
            close(w.fd);
            w.fd = -1;
            return;
        } else {
            return;  // EAGAIN or a transient error: try again next poll
        }
    }
}

// First line and remainder of the worker's standard output.
std::pair<std::string, std::string> split_verdict(const std::string& out) {
    size_t nl = out.find('\n');
    std::string head = nl == std::string::npos ? out : out.substr(0, nl);
    while (!head.empty() && (head.back() == '\r' || head.back() == ' '))
        head.pop_back();
    std::string rest = nl == std::string::npos ? std::string() : out.substr(nl + 1);
    return {head, rest};
}

void score_worker_output(const RunnerConfig& cfg, RunRecord& rec,
                         const std::filesystem::path& instance_path,
                         const std::string& out,
                         const std::unordered_map<std::string, uint64_t>& refs) {
    auto [head, rest] = split_verdict(out);
    if (head == "REALIZABLE") {
        rec.verdict = BenchVerdict::realizable;
    } else if (head == "UNREALIZABLE") {
        rec.verdict = BenchVerdict::unrealizable;
        if (cfg.mode == Mode::synthesis) {
            // A correct unrealizability answer counts as solved but earns no
            // circuit points.
            rec.verified = Verified::pass;
            rec.quality = 0.0;
        }
        return;
    } else {
        rec.verdict = BenchVerdict::error;
        return;
    }
    if (cfg.mode != Mode::synthesis)
        return;
    try {
        AigCircuit controller = parse_aag(rest);
        std::ifstream in(instance_path);
        std::stringstream text;
        text << in.rdbuf();
        VerificationResult v;
        if (cfg.track == Track::safety) {
            SafetySpec spec = classify_safety_spec(parse_aag(text.str()));
            v = verify_safety_controller(spec, controller);
        } else {
            v = verify_parity_controller(parse_ehoa(text.str()), controller);
        }
        rec.gates = gate_count(controller);
        rec.verified = v.pass ? Verified::pass : Verified::fail;
        if (v.pass) {
            auto it = refs.find(rec.instance);
            uint64_t ref = it == refs.end() ? *rec.gates : it->second;
            rec.quality = quality_score(*rec.gates, ref);
        }
    } catch (const std::exception&) {
        rec.verdict = BenchVerdict::error;
        rec.verified = Verified::na;
        rec.gates.reset();
    }
}

}  // namespace

Scoreboard run_suite(const RunnerConfig& cfg) {
    if (cfg.wall_limit_s <= 0)
        throw Error("wall limit must be positive");
    if (!std::filesystem::is_directory(cfg.suite_dir))
        throw Error("suite directory not found: " + cfg.suite_dir.string());

    std::vector<std::filesystem::path> files;
    const std::string want = cfg.track == Track::safety ? ".aag" : ".ehoa";
    for (const auto& entry : std::filesystem::directory_iterator(cfg.suite_dir)) {
        if (!entry.is_regular_file())
            continue;
        const auto ext = entry.path().extension().string();
        if (ext == want || (cfg.track == Track::parity && ext == ".hoa"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::unordered_map<std::string, uint64_t> refs;
    std::filesystem::path refs_path =
        cfg.refs_csv.empty() ? cfg.suite_dir / "refs.csv" : cfg.refs_csv;
    if (std::filesystem::exists(refs_path))
        for (auto& [name, gates] : read_refs_csv(refs_path))
            refs[name] = gates;

    Scoreboard board;
    board.records.resize(files.size());
    for (size_t i = 0; i < files.size(); ++i) {
        board.records[i].config = cfg.label;
        board.records[i].instance = files[i].stem().string();
        board.records[i].track = cfg.track;
        board.records[i].mode = cfg.mode;
    }

    const unsigned workers = std::max(1u, cfg.workers);
    std::vector<Worker> active;
    size_t next = 0;
    while (next < files.size() || !active.empty()) {
        while (active.size() < workers && next < files.size()) {
            active.push_back(spawn(cfg, files[next].string(), next));
            ++next;
        }
        bool progressed = false;
        for (size_t i = 0; i < active.size();) {
            Worker& w = active[i];
            drain(w);
            double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - w.start)
                                 .count();
            if (!w.killed && elapsed >= cfg.wall_limit_s) {
                kill(w.pid, SIGKILL);
                w.killed = true;
            }
            int status = 0;
            rusage ru{};
            pid_t got = wait4(w.pid, &status, WNOHANG, &ru);
            if (got == w.pid) {
                progressed = true;
                // One last nonblocking sweep: the child is gone, so its
                // output is fully buffered, but surviving grandchildren may
                // still hold the write end -- never wait for EOF here.
                drain(w);
                if (w.fd >= 0) {
                    close(w.fd);
                    w.fd = -1;
                }
                double wall = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - w.start)
                                  .count();
                RunRecord& rec = board.records[w.slot];
                rec.wall_s = wall;
                rec.cpu_s = static_cast<double>(ru.ru_utime.tv_sec) +
                            static_cast<double>(ru.ru_utime.tv_usec) * 1e-6;
                if (wall >= cfg.wall_limit_s) {
                    rec.verdict = BenchVerdict::timeout;
                } else if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
                    rec.verdict = BenchVerdict::error;
                } else {
                    score_worker_output(cfg, rec, files[w.slot], w.out, refs);
                }
                active.erase(active.begin() + static_cast<long>(i));
                continue;
            }
            ++i;
        }
        if (!progressed)
            std::this_thread::sleep_for(std::chrono::microseconds(500));
    }
    return board;
}

GameArena generate_arena(ArenaFamily family, uint64_t seed, uint32_t n, uint32_t d) {
    if (n < 1)
        throw Error("arena size must be at least 1");
    if (d < 1)
        throw Error("maximum priority must be at least 1");
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + static_cast<uint64_t>(family));
    auto pick = [&](uint32_t k) { return static_cast<uint32_t>(rng() % k); };

    GameArena a;
    a.vertices.resize(n);
    a.succ.resize(n);
    a.tags.resize(n);
    a.edge_output.resize(n);
    for (uint32_t v = 0; v < n; ++v)
        a.tags[v] = {VertexTag::Kind::state, v, 0};

    switch (family) {
        case ArenaFamily::random:
            for (uint32_t v = 0; v < n; ++v) {
                a.vertices[v].owner = pick(2) == 0 ? Player::eve : Player::adam;
                a.vertices[v].priority = pick(d + 1);
                uint32_t deg = 1 + pick(3);
                while (a.succ[v].size() < deg) {
                    uint32_t t = pick(n);
                    if (std::find(a.succ[v].begin(), a.succ[v].end(), t) ==
                        a.succ[v].end())
                        a.succ[v].push_back(t);
                    if (a.succ[v].size() == n)
                        break;
                }
            }
            break;
        case ArenaFamily::ladder:
            for (uint32_t v = 0; v < n; ++v) {
                a.vertices[v].owner = v % 2 == 0 ? Player::eve : Player::adam;
                a.vertices[v].priority = (n - 1 - v) % (d + 1);
                a.succ[v].push_back((v + 1) % n);
                if (v > 0 && n > 1)
                    a.succ[v].push_back(v - 1);
            }
            break;
        case ArenaFamily::clique:
            for (uint32_t v = 0; v < n; ++v) {
                a.vertices[v].owner = v % 2 == 0 ? Player::eve : Player::adam;
                a.vertices[v].priority = v % (d + 1);
                for (uint32_t t = 0; t < n; ++t)
                    if (t != v)
                        a.succ[v].push_back(t);
                if (n == 1)
                    a.succ[v].push_back(v);
            }
            break;
    }
    a.initial = 0;
    return a;
}

ParityAutomaton generate_parity_instance(uint64_t seed, uint32_t max_states,
                                         uint32_t max_aps) {
    if (max_states < 1 || max_aps < 1)
        throw Error("instance generator needs at least one state and one AP");
    std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dull + 17);
    auto pick = [&](uint32_t k) { return static_cast<uint32_t>(rng() % k); };

    ParityAutomaton aut;
    aut.num_states = 1 + pick(max_states);
    aut.initial = 0;
    uint32_t aps = 1 + pick(max_aps);
    for (uint32_t i = 0; i < aps; ++i) {
        bool ctrl = pick(2) == 0;
        if (ctrl)
            aut.controllable.push_back(i);
        aut.aps.push_back((ctrl ? "c" : "u") + std::to_string(i));
    }
    aut.acceptance.kind = pick(2) == 0 ? AccKind::min : AccKind::max;
    aut.acceptance.polarity = pick(2) == 0 ? AccPolarity::even : AccPolarity::odd;
    aut.acceptance.colors = 1 + pick(5);

    aut.transitions.resize(aut.num_states);
    for (uint32_t q = 0; q < aut.num_states; ++q) {
        // Split the valuation space into disjoint cubes.
        std::vector<Cube> todo{Cube{0, 0}};
        while (!todo.empty()) {
            Cube c = todo.back();
            todo.pop_back();
            uint32_t free_aps = aps - static_cast<uint32_t>(
                                          std::popcount(c.mask & ((1u << aps) - 1)));
            if (free_aps > 0 && pick(100) < 55) {
                uint32_t skip = pick(free_aps);
                uint32_t bit = 0;
                for (uint32_t i = 0; i < aps; ++i)
                    if (!(c.mask >> i & 1) && skip-- == 0) {
                        bit = i;
                        break;
                    }
                todo.push_back(Cube{c.mask | (1u << bit), c.bits});
                todo.push_back(Cube{c.mask | (1u << bit), c.bits | (1u << bit)});
                continue;
            }
            Transition t;
            t.guard = {c};
            t.target = pick(aut.num_states);
            t.priority = pick(4) == 0 ? kNoPriority
                                      : static_cast<int>(pick(aut.acceptance.colors));
            aut.transitions[q].push_back(std::move(t));
        }
    }
    // Round-trip through the printer to validate and stamp derived flags.
    return parse_ehoa(print_ehoa(aut));
}

SafetySpec generate_safety_instance(uint64_t seed, uint32_t unc, uint32_t ctrl,
                                    uint32_t latches) {
    std::mt19937_64 rng(seed * 0xda942042e4dd58b5ull + 3);
    auto pick = [&](uint32_t k) { return static_cast<uint32_t>(rng() % k); };

    AigCircuit c;
    std::vector<uint32_t> pool{0};  // literals usable as operands
    for (uint32_t i = 0; i < unc; ++i) {
        c.inputs.push_back(2 * ++c.max_var);
        c.input_names.push_back("u" + std::to_string(i));
        pool.push_back(c.inputs.back());
    }
    for (uint32_t i = 0; i < ctrl; ++i) {
        c.inputs.push_back(2 * ++c.max_var);
        c.input_names.push_back("controllable_c" + std::to_string(i));
        pool.push_back(c.inputs.back());
    }
    for (uint32_t i = 0; i < latches; ++i) {
        c.latches.push_back({2 * ++c.max_var, 0});
        c.latch_names.push_back("l" + std::to_string(i));
        pool.push_back(c.latches.back().lit);
    }
    auto rand_lit = [&] { return pool[pick(static_cast<uint32_t>(pool.size()))] ^ pick(2); };
    auto make_and = [&](uint32_t a, uint32_t b) {
        uint32_t lhs = 2 * ++c.max_var;
        c.ands.push_back({lhs, a, b});
        pool.push_back(lhs);
        return lhs;
    };

    uint32_t gates = 2 + pick(9);
    for (uint32_t g = 0; g < gates; ++g)
        make_and(rand_lit(), rand_lit());
    for (auto& l : c.latches)
        l.next = rand_lit();

    uint32_t bad;
    switch (unc > 0 && ctrl > 0 ? pick(3) : 2u) {
        case 0: {
            // A directly constrained pair: bad unless some output tracks an input.
            uint32_t u = c.inputs[pick(unc)];
            uint32_t o = c.inputs[unc + pick(ctrl)];
            bad = make_and(u, o ^ 1);
            break;
        }
        case 1: {
            uint32_t u = c.inputs[pick(unc)];
            uint32_t o = c.inputs[unc + pick(ctrl)];
            uint32_t guard = latches > 0 ? c.latches[pick(latches)].lit ^ pick(2)
                                         : rand_lit();
            bad = make_and(make_and(u, o ^ 1), guard);
            break;
        }
        default:
            bad = rand_lit();
            break;
    }
    c.outputs.push_back(bad);
    c.output_names.push_back("bad");
    return classify_safety_spec(parse_aag(print_aag(c)));
}

}  // namespace osynt
