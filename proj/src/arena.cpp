#include "osynt/arena.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "osynt/errors.hpp"

namespace osynt {

namespace {

// Interleave an uncontrollable and a controllable valuation into a full AP
// valuation, following the AP index order of the automaton.
uint32_t weave(const std::vector<uint32_t>& unc, const std::vector<uint32_t>& con,
               uint32_t i, uint32_t o) {
    uint32_t full = 0;
    for (size_t k = 0; k < unc.size(); ++k)
        full |= ((i >> k) & 1u) << unc[k];
    for (size_t k = 0; k < con.size(); ++k)
        full |= ((o >> k) & 1u) << con[k];
    return full;
}

}  // namespace

std::string VertexTag::describe() const {
    switch (kind) {
        case Kind::state:
            return "state " + std::to_string(state);
        case Kind::choice:
            return "state " + std::to_string(state) + " / in " + std::to_string(input);
        case Kind::delay:
            return "to state " + std::to_string(state);
        case Kind::latch_state:
            return "latches " + std::to_string(state);
        case Kind::latch_choice:
            return "latches " + std::to_string(state) + " / in " + std::to_string(input);
        case Kind::sink:
            return "sink";
    }
    return {};
}

GameArena arena_from_parity_automaton(const ParityAutomaton& aut) {
    if (!aut.normalized)
        throw Error("arena construction requires a normalized automaton");
    if (aut.aps.size() > 16)
        throw CapExceededError("AP cap exceeded: " + std::to_string(aut.aps.size()) +
                               " > 16 atomic propositions");

    std::vector<uint32_t> unc = aut.uncontrollable();
    const std::vector<uint32_t>& con = aut.controllable;

    GameArena g;
    g.input_bits = static_cast<uint32_t>(unc.size());
    g.output_bits = static_cast<uint32_t>(con.size());
    for (uint32_t ap : unc)
        g.input_names.push_back(aut.aps[ap]);
    for (uint32_t ap : con)
        g.output_names.push_back(aut.aps[ap]);

    // Auxiliary vertices carry the weakest priority in use so they never
    // become the minimum of a play's recurring priorities.
    uint32_t neutral = 0;
    for (const auto& ts : aut.transitions)
        for (const Transition& t : ts)
            neutral = std::max(neutral, static_cast<uint32_t>(t.priority));

    auto add_vertex = [&](Player owner, uint32_t priority, VertexTag tag) {
        g.vertices.push_back({owner, priority});
        g.succ.emplace_back();
        g.edge_output.emplace_back();
        g.tags.push_back(tag);
        return static_cast<uint32_t>(g.vertices.size() - 1);
    };

    std::vector<uint32_t> state_vertex(aut.num_states);
    for (uint32_t q = 0; q < aut.num_states; ++q)
        state_vertex[q] = add_vertex(Player::adam, neutral,
                                     {VertexTag::Kind::state, q, 0});
    g.initial = state_vertex[aut.initial];

    uint32_t num_inputs = 1u << unc.size();
    uint32_t num_outputs = 1u << con.size();
    for (uint32_t q = 0; q < aut.num_states; ++q) {
        for (uint32_t i = 0; i < num_inputs; ++i) {
            // Merge Eve's answers that agree on (priority, target); remember
            // the first controllable valuation realizing each pair.
            std::vector<std::pair<std::pair<uint32_t, uint32_t>, uint32_t>> pairs;
            std::map<std::pair<uint32_t, uint32_t>, uint32_t> seen;
            for (uint32_t o = 0; o < num_outputs; ++o) {
                const Transition* t = matching_transition(aut, q, weave(unc, con, i, o));
                if (t == nullptr)
                    throw Error("normalized automaton is incomplete at state " +
                                std::to_string(q));
                std::pair<uint32_t, uint32_t> key{static_cast<uint32_t>(t->priority),
                                                  t->target};
                if (seen.emplace(key, o).second)
                    pairs.push_back({key, o});
            }
            if (pairs.size() == 1) {
                // Single merged answer: realize the pair's priority directly
                // on the choice vertex.
                auto [key, o] = pairs[0];
                uint32_t v = add_vertex(Player::eve, key.first,
                                        {VertexTag::Kind::choice, q, i});
                g.succ[state_vertex[q]].push_back(v);
                g.succ[v].push_back(state_vertex[key.second]);
                g.edge_output[v].push_back(o);
                continue;
            }
            uint32_t v = add_vertex(Player::eve, neutral, {VertexTag::Kind::choice, q, i});
            g.succ[state_vertex[q]].push_back(v);
            for (auto& [key, o] : pairs) {
                uint32_t d = add_vertex(Player::eve, key.first,
                                        {VertexTag::Kind::delay, key.second, i});
                g.succ[v].push_back(d);
                g.edge_output[v].push_back(o);
                g.succ[d].push_back(state_vertex[key.second]);
            }
        }
    }
    return g;
}

GameArena arena_from_safety_spec(const SafetySpec& spec) {
    const AigCircuit& c = spec.circuit;
    if (c.latches.size() > 20)
        throw CapExceededError("latch cap exceeded: " + std::to_string(c.latches.size()) +
                               " > 20 latches");
    if (spec.uncontrollable.size() > 16)
        throw CapExceededError("input cap exceeded: " +
                               std::to_string(spec.uncontrollable.size()) +
                               " > 16 uncontrollable inputs");
    if (spec.controllable.size() > 16)
        throw CapExceededError("input cap exceeded: " +
                               std::to_string(spec.controllable.size()) +
                               " > 16 controllable inputs");

    GameArena g;
    g.input_bits = static_cast<uint32_t>(spec.uncontrollable.size());
    g.output_bits = static_cast<uint32_t>(spec.controllable.size());
    for (uint32_t k : spec.uncontrollable)
        g.input_names.push_back(c.input_names[k]);
    for (uint32_t k : spec.controllable)
        g.output_names.push_back(c.input_names[k]);

    auto add_vertex = [&](Player owner, uint32_t priority, VertexTag tag) {
        g.vertices.push_back({owner, priority});
        g.succ.emplace_back();
        g.edge_output.emplace_back();
        g.tags.push_back(tag);
        return static_cast<uint32_t>(g.vertices.size() - 1);
    };

    // The losing sink is only materialized once some move raises bad.
    uint32_t sink = UINT32_MAX;
    auto sink_vertex = [&]() {
        if (sink == UINT32_MAX) {
            sink = add_vertex(Player::eve, 1, {VertexTag::Kind::sink, 0, 0});
            g.succ[sink].push_back(sink);
        }
        return sink;
    };

    // Forward exploration from the all-zero latch state.
    std::unordered_map<uint32_t, uint32_t> vertex_of_state;
    std::vector<uint32_t> todo;
    auto state_vertex = [&](uint32_t latch_val) {
        auto it = vertex_of_state.find(latch_val);
        if (it != vertex_of_state.end())
            return it->second;
        uint32_t v =
            add_vertex(Player::adam, 0, {VertexTag::Kind::latch_state, latch_val, 0});
        vertex_of_state.emplace(latch_val, v);
        todo.push_back(latch_val);
        return v;
    };
    g.initial = state_vertex(0);

    uint32_t num_inputs = 1u << spec.uncontrollable.size();
    uint32_t num_outputs = 1u << spec.controllable.size();
    while (!todo.empty()) {
        uint32_t latch_val = todo.back();
        todo.pop_back();
        uint32_t sv = vertex_of_state[latch_val];
        for (uint32_t i = 0; i < num_inputs; ++i) {
            uint32_t cv = add_vertex(Player::eve, 0,
                                     {VertexTag::Kind::latch_choice, latch_val, i});
            g.succ[sv].push_back(cv);
            for (uint32_t o = 0; o < num_outputs; ++o) {
                uint64_t in_bits = 0;
                for (size_t k = 0; k < spec.uncontrollable.size(); ++k)
                    in_bits |= static_cast<uint64_t>((i >> k) & 1u)
                               << spec.uncontrollable[k];
                for (size_t k = 0; k < spec.controllable.size(); ++k)
                    in_bits |= static_cast<uint64_t>((o >> k) & 1u) << spec.controllable[k];
                StepResult r = simulate(c, latch_val, in_bits);
                uint32_t dst = (r.outputs & 1u)
                                   ? sink_vertex()
                                   : state_vertex(static_cast<uint32_t>(r.next_latches));
                // Merge duplicate answers, keeping the first valuation.
                auto& edges = g.succ[cv];
                if (std::find(edges.begin(), edges.end(), dst) == edges.end()) {
                    edges.push_back(dst);
                    g.edge_output[cv].push_back(o);
                }
            }
        }
    }
    return g;
}

std::string print_pgsolver(const GameArena& arena) {
    std::ostringstream os;
    os << "parity " << arena.size() << ";\n";
    for (uint32_t v = 0; v < arena.size(); ++v) {
        os << v << " " << arena.vertices[v].priority << " "
           << (arena.vertices[v].owner == Player::eve ? 0 : 1) << " ";
        for (size_t k = 0; k < arena.succ[v].size(); ++k) {
            if (k > 0)
                os << ",";
            os << arena.succ[v][k];
        }
        os << " \"" << arena.tags[v].describe() << "\";\n";
    }
    return os.str();
}

std::vector<uint32_t> sink_vertices(const GameArena& arena) {
    std::vector<uint32_t> out;
    for (uint32_t v = 0; v < arena.size(); ++v)
        if (arena.tags[v].kind == VertexTag::Kind::sink)
            out.push_back(v);
    return out;
}

}  // namespace osynt
