#include "osynt/verify.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "osynt/errors.hpp"

namespace osynt {

namespace {

constexpr uint32_t kUndef = UINT32_MAX;

// Positions of controller pins in the spec's uncontrollable/controllable
// orders, established purely by name.
struct Wiring {
    std::vector<uint32_t> in_pos;   // controller input i <- unc position
    std::vector<uint32_t> out_idx;  // controllable j -> controller output
};

std::unordered_map<std::string, uint32_t> index_names(
    const std::vector<std::string>& names, const char* what) {
    std::unordered_map<std::string, uint32_t> m;
    for (uint32_t i = 0; i < names.size(); ++i) {
        if (names[i].empty())
            throw Error(std::string(what) + " " + std::to_string(i) + " is unnamed");
        if (!m.emplace(names[i], i).second)
            throw Error(std::string("duplicate ") + what + " name \"" + names[i] + "\"");
    }
    return m;
}

Wiring wire(const AigCircuit& controller, const std::vector<std::string>& unc_names,
            const std::vector<std::string>& con_names) {
    auto unc = index_names(unc_names, "uncontrollable input");
    auto con = index_names(con_names, "controllable input");
    auto cin = index_names(controller.input_names, "controller input");
    auto cout = index_names(controller.output_names, "controller output");

    if (controller.inputs.size() != unc_names.size())
        throw Error("controller has " + std::to_string(controller.inputs.size()) +
                    " inputs but the specification has " +
                    std::to_string(unc_names.size()) + " uncontrollable inputs");
    if (controller.outputs.size() != con_names.size())
        throw Error("controller has " + std::to_string(controller.outputs.size()) +
                    " outputs but the specification has " +
                    std::to_string(con_names.size()) + " controllable inputs");

    Wiring w;
    w.in_pos.resize(controller.inputs.size());
    for (uint32_t i = 0; i < controller.input_names.size(); ++i) {
        auto it = unc.find(controller.input_names[i]);
        if (it == unc.end())
            throw Error("controller input \"" + controller.input_names[i] +
                        "\" is not an uncontrollable input of the specification");
        w.in_pos[i] = it->second;
    }
    w.out_idx.resize(con_names.size());
    for (uint32_t j = 0; j < con_names.size(); ++j) {
        auto it = cout.find(con_names[j]);
        if (it == cout.end())
            throw Error("controllable input \"" + con_names[j] +
                        "\" is not driven by any controller output");
        w.out_idx[j] = it->second;
    }
    return w;
}

uint64_t controller_inputs(const Wiring& w, uint64_t u) {
    uint64_t word = 0;
    for (uint32_t i = 0; i < w.in_pos.size(); ++i)
        word |= (u >> w.in_pos[i] & 1) << i;
    return word;
}

}  // namespace

AigCircuit compose(const SafetySpec& spec, const AigCircuit& controller) {
    const AigCircuit& sc = spec.circuit;
    if (sc.outputs.size() != 1)
        throw Error("safety specification must have exactly one output");

    std::vector<std::string> unc_names, con_names;
    for (uint32_t idx : spec.uncontrollable)
        unc_names.push_back(sc.input_names[idx]);
    for (uint32_t idx : spec.controllable)
        con_names.push_back(sc.input_names[idx]);
    Wiring w = wire(controller, unc_names, con_names);

    AigCircuit out;
    std::vector<uint32_t> smap(sc.max_var + 1, kUndef);
    std::vector<uint32_t> cmap(controller.max_var + 1, kUndef);
    smap[0] = cmap[0] = 0;
    auto tr = [](const std::vector<uint32_t>& map, uint32_t lit) {
        uint32_t mapped = map[lit >> 1];
        if (mapped == kUndef)
            throw Error("composition references an undefined literal");
        return mapped ^ (lit & 1);
    };

    std::vector<uint32_t> unc_lits;
    for (uint32_t j = 0; j < spec.uncontrollable.size(); ++j) {
        uint32_t lit = 2 * ++out.max_var;
        out.inputs.push_back(lit);
        out.input_names.push_back(unc_names[j]);
        smap[sc.inputs[spec.uncontrollable[j]] >> 1] = lit;
        unc_lits.push_back(lit);
    }
    for (uint32_t i = 0; i < controller.inputs.size(); ++i)
        cmap[controller.inputs[i] >> 1] = unc_lits[w.in_pos[i]];

    for (size_t i = 0; i < sc.latches.size(); ++i) {
        uint32_t lit = 2 * ++out.max_var;
        out.latches.push_back({lit, 0});
        out.latch_names.push_back(sc.latch_names[i]);
        smap[sc.latches[i].lit >> 1] = lit;
    }
    for (size_t i = 0; i < controller.latches.size(); ++i) {
        uint32_t lit = 2 * ++out.max_var;
        out.latches.push_back({lit, 0});
        out.latch_names.push_back(controller.latch_names[i]);
        cmap[controller.latches[i].lit >> 1] = lit;
    }

    // Controller gates depend only on uncontrollable inputs and its own
    // latches, so emitting them first keeps the result topological.
    for (const auto& g : controller.ands) {
        uint32_t lit = 2 * ++out.max_var;
        out.ands.push_back({lit, tr(cmap, g.rhs0), tr(cmap, g.rhs1)});
        cmap[g.lhs >> 1] = lit;
    }
    for (uint32_t j = 0; j < spec.controllable.size(); ++j)
        smap[sc.inputs[spec.controllable[j]] >> 1] =
            tr(cmap, controller.outputs[w.out_idx[j]]);
    for (const auto& g : sc.ands) {
        uint32_t lit = 2 * ++out.max_var;
        out.ands.push_back({lit, tr(smap, g.rhs0), tr(smap, g.rhs1)});
        smap[g.lhs >> 1] = lit;
    }

    for (size_t i = 0; i < sc.latches.size(); ++i)
        out.latches[i].next = tr(smap, sc.latches[i].next);
    for (size_t i = 0; i < controller.latches.size(); ++i)
        out.latches[sc.latches.size() + i].next = tr(cmap, controller.latches[i].next);
    out.outputs.push_back(tr(smap, sc.outputs[0]));
    out.output_names.push_back(sc.output_names[0]);
    return out;
}

VerificationResult verify_safety_controller(const SafetySpec& spec,
                                            const AigCircuit& controller) {
    const AigCircuit& sc = spec.circuit;
    const size_t unc = spec.uncontrollable.size();
    if (unc > 16)
        throw CapExceededError("verification is capped at 16 uncontrollable inputs");
    const size_t joint = sc.latches.size() + controller.latches.size();
    if (joint > 24)
        throw CapExceededError("verification is capped at 24 joint latches, got " +
                               std::to_string(joint));

    AigCircuit closed = compose(spec, controller);
    Wiring w = wire(controller,
                    [&] {
                        std::vector<std::string> v;
                        for (uint32_t idx : spec.uncontrollable)
                            v.push_back(sc.input_names[idx]);
                        return v;
                    }(),
                    [&] {
                        std::vector<std::string> v;
                        for (uint32_t idx : spec.controllable)
                            v.push_back(sc.input_names[idx]);
                        return v;
                    }());

    const uint64_t num_inputs = uint64_t(1) << unc;
    std::vector<char> visited(size_t(1) << joint, 0);
    std::unordered_map<uint64_t, std::pair<uint64_t, uint64_t>> parent;
    std::queue<uint64_t> todo;
    visited[0] = 1;
    todo.push(0);

    VerificationResult res;
    while (!todo.empty()) {
        uint64_t state = todo.front();
        todo.pop();
        for (uint64_t u = 0; u < num_inputs; ++u) {
            StepResult r = simulate(closed, state, u);
            if (r.outputs & 1) {
                std::vector<uint64_t> steps{u};
                for (uint64_t at = state; at != 0;) {
                    auto [prev, in] = parent.at(at);
                    steps.push_back(in);
                    at = prev;
                }
                std::reverse(steps.begin(), steps.end());

                // Replay against the two open circuits, independently of the
                // composition that found the trace.
                uint64_t ls = 0, lc = 0;
                for (size_t t = 0; t < steps.size(); ++t) {
                    StepResult cr = simulate(controller, lc, controller_inputs(w, steps[t]));
                    uint64_t word = 0;
                    for (size_t j = 0; j < spec.uncontrollable.size(); ++j)
                        word |= (steps[t] >> j & 1) << spec.uncontrollable[j];
                    for (size_t j = 0; j < spec.controllable.size(); ++j)
                        word |= (cr.outputs >> w.out_idx[j] & 1) << spec.controllable[j];
                    StepResult sr = simulate(sc, ls, word);
                    bool bad = sr.outputs & 1;
                    if (bad != (t + 1 == steps.size()))
                        throw Error("safety witness failed to replay");
                    ls = sr.next_latches;
                    lc = cr.next_latches;
                }

                res.pass = false;
                res.reason = "bad output raised after " + std::to_string(steps.size()) +
                             " step(s)";
                res.witness = std::move(steps);
                res.cycle_start = res.witness.size();
                return res;
            }
            uint64_t nxt = r.next_latches;
            if (!visited[nxt]) {
                visited[nxt] = 1;
                parent.emplace(nxt, std::make_pair(state, u));
                todo.push(nxt);
            }
        }
    }
    res.pass = true;
    return res;
}

namespace {

struct ProductEdge {
    uint32_t to = 0;
    uint32_t pri = 0;
    uint32_t input = 0;
    char active = 1;
};

struct Product {
    std::vector<std::pair<uint32_t, uint64_t>> states;  // (automaton q, latches)
    std::vector<std::vector<ProductEdge>> adj;
};

// Iterative Tarjan over the active edges of a vertex subset.
std::vector<std::vector<uint32_t>> sccs_of(const Product& p,
                                           const std::vector<uint32_t>& verts) {
    const uint32_t n = static_cast<uint32_t>(p.states.size());
    std::vector<char> in_sub(n, 0);
    for (uint32_t v : verts)
        in_sub[v] = 1;
    std::vector<uint32_t> index(n, kUndef), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<uint32_t> stack;
    std::vector<std::vector<uint32_t>> out;
    uint32_t counter = 0;

    struct Frame {
        uint32_t v;
        uint32_t ei;
    };
    std::vector<Frame> call;
    for (uint32_t root : verts) {
        if (index[root] != kUndef)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            uint32_t v = f.v;
            if (f.ei < p.adj[v].size()) {
                const ProductEdge& e = p.adj[v][f.ei++];
                if (!e.active || !in_sub[e.to])
                    continue;
                if (index[e.to] == kUndef) {
                    index[e.to] = low[e.to] = counter++;
                    stack.push_back(e.to);
                    on_stack[e.to] = 1;
                    call.push_back({e.to, 0});
                } else if (on_stack[e.to]) {
                    low[v] = std::min(low[v], index[e.to]);
                }
                continue;
            }
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                out.emplace_back();
                for (;;) {
                    uint32_t u = stack.back();
                    stack.pop_back();
                    on_stack[u] = 0;
                    out.back().push_back(u);
                    if (u == v)
                        break;
                }
            }
        }
    }
    return out;
}

// Shortest path src -> dst inside `member` over active edges; returns the
// inputs along it. src == dst yields the empty path.
std::vector<uint32_t> path_inputs(const Product& p, const std::vector<char>& member,
                                  uint32_t src, uint32_t dst) {
    if (src == dst)
        return {};
    std::unordered_map<uint32_t, std::pair<uint32_t, uint32_t>> parent;  // v -> (prev, input)
    std::queue<uint32_t> todo;
    todo.push(src);
    std::unordered_set<uint32_t> seen{src};
    while (!todo.empty()) {
        uint32_t v = todo.front();
        todo.pop();
        for (const auto& e : p.adj[v]) {
            if (!e.active || !member[e.to] || seen.count(e.to))
                continue;
            parent.emplace(e.to, std::make_pair(v, e.input));
            if (e.to == dst) {
                std::vector<uint32_t> inputs;
                for (uint32_t at = dst; at != src;) {
                    auto [prev, in] = parent.at(at);
                    inputs.push_back(in);
                    at = prev;
                }
                std::reverse(inputs.begin(), inputs.end());
                return inputs;
            }
            seen.insert(e.to);
            todo.push(e.to);
        }
    }
    throw Error("strongly connected component lost its connectivity");
}

}  // namespace

VerificationResult verify_parity_controller(const ParityAutomaton& aut_in,
                                            const AigCircuit& controller) {
    const ParityAutomaton aut =
        aut_in.normalized ? aut_in : normalize_acceptance(aut_in);
    std::vector<uint32_t> unc = aut.uncontrollable();
    if (unc.size() > 16)
        throw CapExceededError("verification is capped at 16 uncontrollable APs");

    std::vector<std::string> unc_names, con_names;
    for (uint32_t idx : unc)
        unc_names.push_back(aut.aps[idx]);
    for (uint32_t idx : aut.controllable)
        con_names.push_back(aut.aps[idx]);
    Wiring w = wire(controller, unc_names, con_names);

    const uint64_t num_inputs = uint64_t(1) << unc.size();
    Product p;
    std::unordered_map<uint64_t, uint32_t> id_of;
    auto intern = [&](uint32_t q, uint64_t lc) {
        uint64_t key = static_cast<uint64_t>(q) << 32 | lc;
        auto [it, fresh] = id_of.emplace(key, static_cast<uint32_t>(p.states.size()));
        if (fresh) {
            if (p.states.size() >= (size_t(1) << 24))
                throw CapExceededError("product state cap (2^24) exceeded");
            p.states.emplace_back(q, lc);
            p.adj.emplace_back();
        }
        return it->second;
    };
    if (controller.latches.size() > 32)
        throw CapExceededError("verification is capped at 32 controller latches");

    intern(aut.initial, 0);
    for (uint32_t id = 0; id < p.states.size(); ++id) {
        auto [q, lc] = p.states[id];
        for (uint64_t u = 0; u < num_inputs; ++u) {
            StepResult cr = simulate(controller, lc, controller_inputs(w, u));
            uint32_t word = 0;
            for (size_t j = 0; j < unc.size(); ++j)
                word |= static_cast<uint32_t>(u >> j & 1) << unc[j];
            for (size_t j = 0; j < aut.controllable.size(); ++j)
                word |= static_cast<uint32_t>(cr.outputs >> w.out_idx[j] & 1)
                        << aut.controllable[j];
            const Transition* t = matching_transition(aut, q, word);
            if (t == nullptr)
                throw Error("normalized automaton is not complete");
            // interning may grow p.adj, so take the id before indexing
            uint32_t to = intern(t->target, cr.next_latches);
            p.adj[id].push_back(
                {to, static_cast<uint32_t>(t->priority), static_cast<uint32_t>(u), 1});
        }
    }

    std::vector<std::vector<uint32_t>> worklist;
    {
        std::vector<uint32_t> all(p.states.size());
        for (uint32_t v = 0; v < all.size(); ++v)
            all[v] = v;
        worklist.push_back(std::move(all));
    }
    VerificationResult res;
    while (!worklist.empty()) {
        std::vector<uint32_t> verts = std::move(worklist.back());
        worklist.pop_back();
        for (auto& scc : sccs_of(p, verts)) {
            std::vector<char> member(p.states.size(), 0);
            for (uint32_t v : scc)
                member[v] = 1;
            uint32_t min_pri = kUndef;
            uint32_t src = kUndef, src_edge = 0;
            for (uint32_t v : scc)
                for (uint32_t ei = 0; ei < p.adj[v].size(); ++ei) {
                    const auto& e = p.adj[v][ei];
                    if (!e.active || !member[e.to])
                        continue;
                    if (e.pri < min_pri) {
                        min_pri = e.pri;
                        src = v;
                        src_edge = ei;
                    }
                }
            if (min_pri == kUndef)
                continue;  // no internal edge: trivial component
            if (min_pri % 2 == 0) {
                bool any = false;
                for (uint32_t v : scc)
                    for (auto& e : p.adj[v])
                        if (e.active && member[e.to] && e.pri == min_pri) {
                            e.active = 0;
                        } else if (e.active && member[e.to]) {
                            any = true;
                        }
                if (any)
                    worklist.push_back(std::move(scc));
                continue;
            }

            // Odd minimum: lasso through the offending edge.
            const ProductEdge& e = p.adj[src][src_edge];
            std::vector<uint32_t> prefix;
            {
                // Reach src from the initial product state over real edges.
                std::unordered_map<uint32_t, std::pair<uint32_t, uint32_t>> par;
                std::queue<uint32_t> todo;
                todo.push(0);
                std::unordered_set<uint32_t> seen{0};
                bool found = src == 0;
                while (!todo.empty() && !found) {
                    uint32_t v = todo.front();
                    todo.pop();
                    for (const auto& g : p.adj[v]) {
                        if (seen.count(g.to))
                            continue;
                        par.emplace(g.to, std::make_pair(v, g.input));
                        if (g.to == src) {
                            found = true;
                            break;
                        }
                        seen.insert(g.to);
                        todo.push(g.to);
                    }
                }
                if (!found && src != 0)
                    throw Error("product lost reachability of a live component");
                for (uint32_t at = src; at != 0;) {
                    auto [prev, in] = par.at(at);
                    prefix.push_back(in);
                    at = prev;
                }
                std::reverse(prefix.begin(), prefix.end());
            }
            std::vector<uint32_t> cycle{e.input};
            auto back = path_inputs(p, member, e.to, src);
            cycle.insert(cycle.end(), back.begin(), back.end());

            // Replay: run the controller and automaton along the witness and
            // confirm the loop closes with odd minimal priority.
            uint32_t q = aut.initial;
            uint64_t lc = 0;
            auto step = [&](uint32_t u) {
                StepResult cr = simulate(controller, lc, controller_inputs(w, u));
                uint32_t word = 0;
                for (size_t j = 0; j < unc.size(); ++j)
                    word |= static_cast<uint32_t>(u >> j & 1) << unc[j];
                for (size_t j = 0; j < aut.controllable.size(); ++j)
                    word |= static_cast<uint32_t>(cr.outputs >> w.out_idx[j] & 1)
                            << aut.controllable[j];
                const Transition* t = matching_transition(aut, q, word);
                if (t == nullptr)
                    throw Error("parity witness failed to replay");
                q = t->target;
                lc = cr.next_latches;
                return static_cast<uint32_t>(t->priority);
            };
            for (uint32_t u : prefix)
                step(u);
            if (std::make_pair(q, lc) != p.states[src])
                throw Error("parity witness failed to replay");
            uint32_t replay_min = kUndef;
            for (uint32_t u : cycle)
                replay_min = std::min(replay_min, step(u));
            if (std::make_pair(q, lc) != p.states[src] || replay_min % 2 == 0)
                throw Error("parity witness failed to replay");

            res.pass = false;
            res.reason = "odd priority " + std::to_string(min_pri) +
                         " recurs on an input loop of length " +
                         std::to_string(cycle.size());
            res.witness = std::vector<uint64_t>(prefix.begin(), prefix.end());
            res.cycle_start = res.witness.size();
            for (uint32_t u : cycle)
                res.witness.push_back(u);
            return res;
        }
    }
    res.pass = true;
    return res;
}

}  // namespace osynt
