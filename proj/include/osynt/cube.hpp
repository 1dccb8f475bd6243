#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace osynt {

/// Conjunction of AP literals over at most 32 propositions: `mask` selects
/// the constrained APs, `bits` gives their required values (bits subset of
/// mask). mask == 0 is the universal cube.
struct Cube {
    uint32_t mask = 0;
    uint32_t bits = 0;

    bool operator==(const Cube&) const = default;

    bool matches(uint32_t valuation) const { return (valuation & mask) == bits; }

    bool intersects(const Cube& o) const {
        uint32_t common = mask & o.mask;
        return (bits & common) == (o.bits & common);
    }

    /// True if every valuation matched by `o` is also matched by this cube.
    bool subsumes(const Cube& o) const {
        return (o.mask & mask) == mask && (o.bits & mask) == bits;
    }
};

/// Disjunction of cubes (DNF). An empty guard is `false`.
using Guard = std::vector<Cube>;

bool guard_matches(const Guard& g, uint32_t valuation);

std::optional<Cube> cube_intersection(const Cube& a, const Cube& b);

/// Cubes covering exactly the valuations matched by `from` but not `minus`.
std::vector<Cube> cube_subtract(const Cube& from, const Cube& minus);

/// Cubes covering exactly the valuations no cube of `covered` matches.
/// Empty result means `covered` is exhaustive.
std::vector<Cube> coverage_residual(const std::vector<Cube>& covered);

/// Drop duplicate and subsumed cubes in place.
void prune_guard(Guard& g);

}  // namespace osynt
