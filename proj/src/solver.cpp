#include "osynt/solver.hpp"

#include <algorithm>
#include <functional>

#include "osynt/errors.hpp"

namespace osynt {

namespace {

void require_total(const GameArena& a) {
    for (uint32_t v = 0; v < a.size(); ++v)
        if (a.succ[v].empty())
            throw Error("vertex " + std::to_string(v) + " has no successors");
}

std::vector<std::vector<uint32_t>> predecessors(const GameArena& a) {
    std::vector<std::vector<uint32_t>> preds(a.size());
    for (uint32_t v = 0; v < a.size(); ++v)
        for (uint32_t w : a.succ[v])
            preds[w].push_back(v);
    return preds;
}

// Attractor of `targets` for `player` within the subgame `mask`. Returns the
// attracted vertices (targets included); records, for player-owned vertices
// attracted through an edge, that edge as their strategy.
std::vector<uint32_t> attr_masked(const GameArena& a,
                                  const std::vector<std::vector<uint32_t>>& preds,
                                  const std::vector<char>& mask, Player player,
                                  const std::vector<uint32_t>& targets,
                                  std::vector<uint32_t>* strategy) {
    std::vector<char> in_attr(a.size(), 0);
    std::vector<uint32_t> cnt(a.size(), 0);
    for (uint32_t v = 0; v < a.size(); ++v) {
        if (!mask[v] || a.vertices[v].owner == player)
            continue;
        for (uint32_t w : a.succ[v])
            if (mask[w])
                ++cnt[v];
    }
    std::vector<uint32_t> queue;
    for (uint32_t t : targets) {
        if (mask[t] && !in_attr[t]) {
            in_attr[t] = 1;
            queue.push_back(t);
        }
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint32_t v = queue[qi];
        for (uint32_t u : preds[v]) {
            if (!mask[u] || in_attr[u])
                continue;
            if (a.vertices[u].owner == player) {
                in_attr[u] = 1;
                if (strategy != nullptr)
                    (*strategy)[u] = v;
                queue.push_back(u);
            } else if (--cnt[u] == 0) {
                in_attr[u] = 1;
                queue.push_back(u);
            }
        }
    }
    return queue;
}

// Strip strategy entries that ended up outside their owner's final region.
void clear_losing_strategies(Solution& s) {
    for (size_t v = 0; v < s.winner.size(); ++v) {
        if (s.winner[v] == Player::eve)
            s.strategy_adam[v] = kNoVertex;
        else
            s.strategy_eve[v] = kNoVertex;
    }
}

struct ZielonkaCtx {
    const GameArena& a;
    const std::vector<std::vector<uint32_t>>& preds;
    Solution& sol;

    std::vector<uint32_t>& strategy_of(Player p) {
        return p == Player::eve ? sol.strategy_eve : sol.strategy_adam;
    }
};

// Classical recursive algorithm. Fills winner and strategies for every
// vertex of `mask`; returns the two regions.
std::pair<std::vector<uint32_t>, std::vector<uint32_t>> zielonka_rec(
    ZielonkaCtx& ctx, std::vector<char> mask, uint32_t count) {
    std::pair<std::vector<uint32_t>, std::vector<uint32_t>> regions;
    if (count == 0)
        return regions;
    const GameArena& a = ctx.a;

    uint32_t p = UINT32_MAX;
    for (uint32_t v = 0; v < a.size(); ++v)
        if (mask[v])
            p = std::min(p, a.vertices[v].priority);
    Player alpha = p % 2 == 0 ? Player::eve : Player::adam;
    Player beta = opponent(alpha);

    std::vector<uint32_t> tops;
    for (uint32_t v = 0; v < a.size(); ++v)
        if (mask[v] && a.vertices[v].priority == p)
            tops.push_back(v);

    std::vector<uint32_t> astrat(a.size(), kNoVertex);
    std::vector<uint32_t> attracted =
        attr_masked(a, ctx.preds, mask, alpha, tops, &astrat);

    std::vector<char> rest = mask;
    for (uint32_t v : attracted)
        rest[v] = 0;
    auto sub = zielonka_rec(ctx, rest, count - static_cast<uint32_t>(attracted.size()));
    auto& sub_beta = alpha == Player::eve ? sub.second : sub.first;

    if (sub_beta.empty()) {
        // alpha wins the whole subgame: attract to the top-priority vertices
        // forever, falling back into the recursive region when the play
        // settles there.
        std::vector<uint32_t>& strat = ctx.strategy_of(alpha);
        for (uint32_t v : attracted) {
            ctx.sol.winner[v] = alpha;
            if (a.vertices[v].owner != alpha)
                continue;
            if (a.vertices[v].priority == p) {
                for (uint32_t w : a.succ[v])
                    if (mask[w]) {
                        strat[v] = w;
                        break;
                    }
            } else if (astrat[v] != kNoVertex) {
                strat[v] = astrat[v];
            }
        }
        auto& mine = alpha == Player::eve ? regions.first : regions.second;
        mine.reserve(count);
        for (uint32_t v = 0; v < a.size(); ++v)
            if (mask[v])
                mine.push_back(v);
        return regions;
    }

    std::vector<uint32_t> bstrat(a.size(), kNoVertex);
    std::vector<uint32_t> bset = attr_masked(a, ctx.preds, mask, beta, sub_beta, &bstrat);
    std::vector<char> rest2 = mask;
    for (uint32_t v : bset)
        rest2[v] = 0;
    auto sub2 = zielonka_rec(ctx, rest2, count - static_cast<uint32_t>(bset.size()));
    auto& sub2_alpha = alpha == Player::eve ? sub2.first : sub2.second;
    auto& sub2_beta = alpha == Player::eve ? sub2.second : sub2.first;

    std::vector<uint32_t>& bstrat_out = ctx.strategy_of(beta);
    std::vector<char> in_subbeta(a.size(), 0);
    for (uint32_t v : sub_beta)
        in_subbeta[v] = 1;
    for (uint32_t v : bset) {
        ctx.sol.winner[v] = beta;
        if (a.vertices[v].owner == beta && !in_subbeta[v] && bstrat[v] != kNoVertex)
            bstrat_out[v] = bstrat[v];
    }

    auto& alpha_out = alpha == Player::eve ? regions.first : regions.second;
    auto& beta_out = alpha == Player::eve ? regions.second : regions.first;
    alpha_out = std::move(sub2_alpha);
    beta_out = std::move(sub2_beta);
    beta_out.insert(beta_out.end(), bset.begin(), bset.end());
    return regions;
}

Solution make_solution(size_t n) {
    Solution s;
    s.winner.assign(n, Player::eve);
    s.strategy_eve.assign(n, kNoVertex);
    s.strategy_adam.assign(n, kNoVertex);
    return s;
}

}  // namespace

std::vector<uint32_t> attractor(const GameArena& arena, Player player,
                                const std::vector<uint32_t>& target) {
    for (uint32_t t : target)
        if (t >= arena.size())
            throw Error("attractor target out of range");
    auto preds = predecessors(arena);
    std::vector<char> mask(arena.size(), 1);
    auto out = attr_masked(arena, preds, mask, player, target, nullptr);
    std::sort(out.begin(), out.end());
    return out;
}

Solution solve_safety(const GameArena& arena, const std::vector<uint32_t>& unsafe) {
    require_total(arena);
    for (uint32_t t : unsafe)
        if (t >= arena.size())
            throw Error("unsafe vertex out of range");
    auto preds = predecessors(arena);
    std::vector<char> mask(arena.size(), 1);
    Solution s = make_solution(arena.size());
    std::vector<uint32_t> astrat(arena.size(), kNoVertex);
    std::vector<uint32_t> lost = attr_masked(arena, preds, mask, Player::adam, unsafe, &astrat);
    std::vector<char> in_lost(arena.size(), 0);
    for (uint32_t v : lost)
        in_lost[v] = 1;
    for (uint32_t v = 0; v < arena.size(); ++v) {
        s.winner[v] = in_lost[v] ? Player::adam : Player::eve;
        if (in_lost[v] && arena.vertices[v].owner == Player::adam) {
            if (astrat[v] != kNoVertex) {
                s.strategy_adam[v] = astrat[v];
            } else {
                // Unsafe vertex itself: prefer staying in Adam's region.
                for (uint32_t w : arena.succ[v])
                    if (in_lost[w]) {
                        s.strategy_adam[v] = w;
                        break;
                    }
                if (s.strategy_adam[v] == kNoVertex)
                    s.strategy_adam[v] = arena.succ[v][0];
            }
        }
        if (!in_lost[v] && arena.vertices[v].owner == Player::eve) {
            for (uint32_t w : arena.succ[v])
                if (!in_lost[w]) {
                    s.strategy_eve[v] = w;
                    break;
                }
        }
    }
    clear_losing_strategies(s);
    return s;
}

Solution solve_parity_zielonka(const GameArena& arena) {
    require_total(arena);
    auto preds = predecessors(arena);
    Solution s = make_solution(arena.size());
    ZielonkaCtx ctx{arena, preds, s};
    std::vector<char> mask(arena.size(), 1);
    zielonka_rec(ctx, std::move(mask), static_cast<uint32_t>(arena.size()));
    clear_losing_strategies(s);
    return s;
}

Solution solve_parity_dfi(const GameArena& arena) {
    require_total(arena);
    const size_t n = arena.size();

    // Ascending distinct priorities; index 0 is the most significant level.
    std::vector<uint32_t> levels;
    for (uint32_t v = 0; v < n; ++v)
        levels.push_back(arena.vertices[v].priority);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<char> dist(n, 0);
    auto base = [&](uint32_t v) {
        return arena.vertices[v].priority % 2 == 0 ? Player::eve : Player::adam;
    };
    auto est = [&](uint32_t v) { return dist[v] ? opponent(base(v)) : base(v); };
    auto onestep = [&](uint32_t v) {
        Player owner = arena.vertices[v].owner;
        for (uint32_t w : arena.succ[v])
            if (est(w) == owner)
                return owner;
        return opponent(owner);
    };

    // A vertex whose priority "promises" its player the play but whose
    // one-step evaluation contradicts that is a distraction. Bits at a level
    // only accumulate while that level iterates; any flip restarts all less
    // significant levels from zero.
    std::function<void(size_t)> fix = [&](size_t li) {
        if (li >= levels.size())
            return;
        for (;;) {
            fix(li + 1);
            bool changed = false;
            for (uint32_t v = 0; v < n; ++v) {
                if (dist[v] || arena.vertices[v].priority != levels[li])
                    continue;
                if (onestep(v) != base(v)) {
                    dist[v] = 1;
                    changed = true;
                }
            }
            if (!changed)
                return;
            for (uint32_t v = 0; v < n; ++v)
                if (arena.vertices[v].priority > levels[li])
                    dist[v] = 0;
        }
    };
    fix(0);

    Solution s = make_solution(n);
    for (uint32_t v = 0; v < n; ++v)
        s.winner[v] = est(v);

    // Strategies: re-solve each winning region as a subgame. The region is
    // closed for its winner, so the restricted solve must hand the whole
    // region to them; anything else means the fixpoint was wrong.
    auto preds = predecessors(arena);
    for (Player p : {Player::eve, Player::adam}) {
        std::vector<char> mask(n, 0);
        uint32_t count = 0;
        for (uint32_t v = 0; v < n; ++v)
            if (s.winner[v] == p) {
                mask[v] = 1;
                ++count;
            }
        if (count == 0)
            continue;
        Solution sub = make_solution(n);
        ZielonkaCtx ctx{arena, preds, sub};
        auto regions = zielonka_rec(ctx, std::move(mask), count);
        auto& won = p == Player::eve ? regions.first : regions.second;
        if (won.size() != count)
            throw Error("distraction fixpoint produced an inconsistent winner map");
        auto& src = p == Player::eve ? sub.strategy_eve : sub.strategy_adam;
        auto& dst = p == Player::eve ? s.strategy_eve : s.strategy_adam;
        for (uint32_t v = 0; v < n; ++v)
            if (s.winner[v] == p)
                dst[v] = src[v];
    }
    clear_losing_strategies(s);
    return s;
}

std::vector<Player> brute_force_solve(const GameArena& arena) {
    require_total(arena);
    const size_t n = arena.size();
    if (n > 12)
        throw CapExceededError("brute force is capped at 12 vertices, got " +
                               std::to_string(n));
    for (uint32_t v = 0; v < n; ++v)
        if (arena.succ[v].size() > 4)
            throw CapExceededError("brute force is capped at out-degree 4");

    std::vector<uint32_t> eve_vs, adam_vs;
    for (uint32_t v = 0; v < n; ++v)
        (arena.vertices[v].owner == Player::eve ? eve_vs : adam_vs).push_back(v);

    std::vector<uint32_t> next(n, 0);
    std::vector<uint32_t> choice(n, 0);

    // Winner of every induced play of one fixed strategy profile.
    std::vector<uint8_t> status(n);
    std::vector<Player> profile_winner(n, Player::eve);
    auto eval_profile = [&]() {
        std::fill(status.begin(), status.end(), 0);
        std::vector<uint32_t> path;
        for (uint32_t start = 0; start < n; ++start) {
            if (status[start] == 2)
                continue;
            path.clear();
            uint32_t v = start;
            while (status[v] == 0) {
                status[v] = 1;
                path.push_back(v);
                v = next[v];
            }
            Player w;
            if (status[v] == 1) {
                size_t idx = std::find(path.begin(), path.end(), v) - path.begin();
                uint32_t m = UINT32_MAX;
                for (size_t k = idx; k < path.size(); ++k)
                    m = std::min(m, arena.vertices[path[k]].priority);
                w = m % 2 == 0 ? Player::eve : Player::adam;
            } else {
                w = profile_winner[v];
            }
            for (uint32_t u : path) {
                profile_winner[u] = w;
                status[u] = 2;
            }
        }
    };

    auto advance = [&](const std::vector<uint32_t>& vs) {
        for (uint32_t v : vs) {
            if (++choice[v] < arena.succ[v].size()) {
                next[v] = arena.succ[v][choice[v]];
                return true;
            }
            choice[v] = 0;
            next[v] = arena.succ[v][0];
        }
        return false;
    };

    std::vector<char> eve_can_win(n, 0);
    for (uint32_t v = 0; v < n; ++v) {
        choice[v] = 0;
        next[v] = arena.succ[v][0];
    }
    do {
        std::vector<char> beats_all(n, 1);
        do {
            eval_profile();
            for (uint32_t v = 0; v < n; ++v)
                if (profile_winner[v] == Player::adam)
                    beats_all[v] = 0;
        } while (advance(adam_vs));
        for (uint32_t v = 0; v < n; ++v)
            if (beats_all[v])
                eve_can_win[v] = 1;
    } while (advance(eve_vs));

    std::vector<Player> out(n);
    for (uint32_t v = 0; v < n; ++v)
        out[v] = eve_can_win[v] ? Player::eve : Player::adam;
    return out;
}

Lasso play(const GameArena& arena, const std::vector<uint32_t>& strategy_eve,
           const std::vector<uint32_t>& strategy_adam, uint32_t from) {
    if (from >= arena.size())
        throw Error("play start vertex out of range");
    std::vector<uint32_t> order(arena.size(), kNoVertex);
    std::vector<uint32_t> visited;
    uint32_t v = from;
    while (order[v] == kNoVertex) {
        order[v] = static_cast<uint32_t>(visited.size());
        visited.push_back(v);
        const auto& strat =
            arena.vertices[v].owner == Player::eve ? strategy_eve : strategy_adam;
        uint32_t nxt = strat[v];
        if (nxt == kNoVertex)
            throw Error("strategy undefined at vertex " + std::to_string(v));
        if (std::find(arena.succ[v].begin(), arena.succ[v].end(), nxt) ==
            arena.succ[v].end())
            throw Error("strategy at vertex " + std::to_string(v) +
                        " does not follow an edge");
        v = nxt;
    }
    Lasso l;
    uint32_t cut = order[v];
    l.prefix.assign(visited.begin(), visited.begin() + cut);
    l.cycle.assign(visited.begin() + cut, visited.end());
    return l;
}

void check_solution(const GameArena& arena, const Solution& s) {
    const size_t n = arena.size();
    if (s.winner.size() != n || s.strategy_eve.size() != n || s.strategy_adam.size() != n)
        throw Error("solution arrays do not match the arena");
    for (uint32_t v = 0; v < n; ++v) {
        for (Player p : {Player::eve, Player::adam}) {
            const auto& strat = p == Player::eve ? s.strategy_eve : s.strategy_adam;
            uint32_t t = strat[v];
            if (t == kNoVertex) {
                if (arena.vertices[v].owner == p && s.winner[v] == p)
                    throw Error("missing strategy for vertex " + std::to_string(v));
                continue;
            }
            if (arena.vertices[v].owner != p || s.winner[v] != p)
                throw Error("spurious strategy entry at vertex " + std::to_string(v));
            if (std::find(arena.succ[v].begin(), arena.succ[v].end(), t) ==
                arena.succ[v].end())
                throw Error("strategy at vertex " + std::to_string(v) + " is not an edge");
            if (s.winner[t] != p)
                throw Error("strategy at vertex " + std::to_string(v) +
                            " leaves the winning region");
        }
    }
}

}  // namespace osynt
