#include "osynt/cube.hpp"

#include <algorithm>

namespace osynt {

bool guard_matches(const Guard& g, uint32_t valuation) {
    for (const Cube& c : g)
        if (c.matches(valuation))
            return true;
    return false;
}

std::optional<Cube> cube_intersection(const Cube& a, const Cube& b) {
    if (!a.intersects(b))
        return std::nullopt;
    return Cube{a.mask | b.mask, a.bits | b.bits};
}

std::vector<Cube> cube_subtract(const Cube& from, const Cube& minus) {
    if (!from.intersects(minus))
        return {from};
    std::vector<Cube> out;
    // Peel off, one literal of `minus` at a time, the part of `from` that
    // disagrees with it; what remains at the end lies inside `minus`.
    Cube cur = from;
    uint32_t extra = minus.mask & ~from.mask;
    for (uint32_t v = 0; v < 32; ++v) {
        uint32_t bit = 1u << v;
        if (!(extra & bit))
            continue;
        Cube off = cur;
        off.mask |= bit;
        off.bits |= (~minus.bits) & bit;
        out.push_back(off);
        cur.mask |= bit;
        cur.bits |= minus.bits & bit;
    }
    return out;
}

std::vector<Cube> coverage_residual(const std::vector<Cube>& covered) {
    std::vector<Cube> rest{Cube{}};
    for (const Cube& c : covered) {
        std::vector<Cube> next;
        for (const Cube& r : rest) {
            auto parts = cube_subtract(r, c);
            next.insert(next.end(), parts.begin(), parts.end());
        }
        rest = std::move(next);
        if (rest.empty())
            break;
    }
    return rest;
}

void prune_guard(Guard& g) {
    std::vector<char> dead(g.size(), 0);
    for (size_t i = 0; i < g.size(); ++i) {
        if (dead[i])
            continue;
        for (size_t j = 0; j < g.size(); ++j)
            if (i != j && !dead[j] && g[i].subsumes(g[j]))
                dead[j] = 1;
    }
    Guard out;
    out.reserve(g.size());
    for (size_t i = 0; i < g.size(); ++i)
        if (!dead[i])
            out.push_back(g[i]);
    g = std::move(out);
}

}  // namespace osynt
