#include "osynt/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "osynt/errors.hpp"

namespace osynt {

namespace {

uint32_t state_bits(uint32_t num_states) {
    uint32_t k = 0;
    while ((1u << k) < num_states)
        ++k;
    return k;
}

struct AigBuilder {
    AigCircuit c;
    std::unordered_map<uint64_t, uint32_t> cache;

    uint32_t fresh_var() { return ++c.max_var; }

    uint32_t make_and(uint32_t a, uint32_t b) {
        if (a < b)
            std::swap(a, b);
        if (b == 0 || (a ^ b) == 1)
            return 0;
        if (b == 1 || a == b)
            return a;
        uint64_t key = static_cast<uint64_t>(a) << 32 | b;
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        uint32_t lhs = 2 * fresh_var();
        c.ands.push_back({lhs, a, b});
        cache.emplace(key, lhs);
        return lhs;
    }

    // sel ? hi : lo
    uint32_t make_mux(uint32_t sel, uint32_t hi, uint32_t lo) {
        if (hi == lo)
            return hi;
        return make_and(make_and(sel, hi) ^ 1, make_and(sel ^ 1, lo) ^ 1) ^ 1;
    }
};

// Cofactor tree over the truth table slice [offset, offset + len): the
// variable at `level` is the most significant remaining index bit. Equal
// subtrees collapse through the AND cache.
uint32_t shannon(AigBuilder& b, const std::vector<uint32_t>& var_lits,
                 const std::vector<char>& bits, size_t level, size_t offset,
                 size_t len) {
    bool all_equal = true;
    for (size_t i = 1; i < len && all_equal; ++i)
        all_equal = bits[offset + i] == bits[offset];
    if (all_equal)
        return bits[offset] ? 1u : 0u;
    size_t half = len / 2;
    uint32_t lo = shannon(b, var_lits, bits, level + 1, offset, half);
    uint32_t hi = shannon(b, var_lits, bits, level + 1, offset + half, half);
    return b.make_mux(var_lits[level], hi, lo);
}

}  // namespace

MealyMachine strategy_to_mealy(const GameArena& arena, const Solution& solution) {
    if (solution.winner.size() != arena.size())
        throw Error("solution does not match the arena");
    if (solution.winner_at(arena.initial) != Player::eve)
        throw UnrealizableError("the specification is unrealizable");

    MealyMachine m;
    m.input_bits = arena.input_bits;
    m.output_bits = arena.output_bits;
    m.input_names = arena.input_names;
    m.output_names = arena.output_names;
    const uint32_t full_mask =
        arena.input_bits == 0 ? 0 : (1u << arena.input_bits) - 1;

    std::unordered_map<uint32_t, uint32_t> id_of;
    std::vector<uint32_t> order;
    auto intern = [&](uint32_t v) {
        auto [it, fresh] = id_of.emplace(v, static_cast<uint32_t>(order.size()));
        if (fresh)
            order.push_back(v);
        return it->second;
    };
    intern(arena.initial);

    for (size_t next = 0; next < order.size(); ++next) {
        uint32_t s = order[next];
        m.rows.emplace_back();
        auto& row = m.rows.back();
        for (uint32_t c : arena.succ[s]) {
            const VertexTag& tag = arena.tags[c];
            uint32_t picked = solution.strategy_eve[c];
            if (picked == kNoVertex)
                throw Error("winning strategy undefined at " + tag.describe());
            size_t k = std::find(arena.succ[c].begin(), arena.succ[c].end(), picked) -
                       arena.succ[c].begin();
            if (k == arena.succ[c].size() || k >= arena.edge_output[c].size())
                throw Error("strategy edge missing its output annotation at " +
                            tag.describe());
            uint32_t dst = picked;
            if (arena.tags[dst].kind == VertexTag::Kind::delay)
                dst = arena.succ[dst][0];
            if (arena.tags[dst].kind == VertexTag::Kind::sink)
                throw Error("winning strategy reaches the losing sink at " +
                            tag.describe());
            row.push_back({Cube{full_mask, tag.input},
                           arena.edge_output[c][k], intern(dst)});
        }
    }
    m.num_states = static_cast<uint32_t>(order.size());
    return m;
}

AigCircuit mealy_to_aiger(const MealyMachine& m) {
    if (m.num_states == 0 || m.rows.size() != m.num_states)
        throw Error("malformed machine");
    const uint32_t k = state_bits(m.num_states);
    const uint32_t in = m.input_bits;
    if (k + in > 24)
        throw CapExceededError("controller table too large: " + std::to_string(k) +
                               " state bits + " + std::to_string(in) + " input bits");

    // packed[(s << in) | x] = next_state << output_bits | outputs
    const size_t table = static_cast<size_t>(1) << (k + in);
    std::vector<uint64_t> packed(table, 0);
    for (uint32_t s = 0; s < m.num_states; ++s) {
        for (uint32_t x = 0; x < (1u << in); ++x) {
            const MealyTransition* hit = nullptr;
            for (const auto& t : m.rows[s])
                if (t.input.matches(x)) {
                    hit = &t;
                    break;
                }
            if (hit == nullptr)
                throw Error("machine row " + std::to_string(s) +
                            " does not cover input " + std::to_string(x));
            packed[(static_cast<size_t>(s) << in) | x] =
                static_cast<uint64_t>(hit->target) << m.output_bits | hit->output;
        }
    }

    AigBuilder b;
    for (uint32_t i = 0; i < in; ++i)
        b.c.inputs.push_back(2 * b.fresh_var());
    for (uint32_t i = 0; i < k; ++i)
        b.c.latches.push_back({2 * b.fresh_var(), 0});

    // Most significant index bit first: state bits, then input bits.
    std::vector<uint32_t> var_lits;
    for (uint32_t i = k; i-- > 0;)
        var_lits.push_back(b.c.latches[i].lit);
    for (uint32_t i = in; i-- > 0;)
        var_lits.push_back(b.c.inputs[i]);

    std::vector<char> bits(table);
    auto build_bit = [&](uint32_t bit) {
        for (size_t e = 0; e < table; ++e)
            bits[e] = static_cast<char>(packed[e] >> bit & 1);
        return shannon(b, var_lits, bits, 0, 0, table);
    };

    for (uint32_t j = 0; j < m.output_bits; ++j)
        b.c.outputs.push_back(build_bit(j));
    for (uint32_t i = 0; i < k; ++i)
        b.c.latches[i].next = build_bit(m.output_bits + i);

    b.c.input_names = m.input_names;
    b.c.output_names = m.output_names;
    for (uint32_t i = 0; i < k; ++i)
        b.c.latch_names.push_back("s" + std::to_string(i));
    return std::move(b.c);
}

uint64_t gate_count(const AigCircuit& c) {
    return c.ands.size();
}

double quality_score(uint64_t size, uint64_t reference) {
    double points = 2.0 - std::log10((static_cast<double>(size) + 1.0) /
                                     (static_cast<double>(reference) + 1.0));
    return std::max(0.0, points);
}

}  // namespace osynt
