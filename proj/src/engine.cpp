#include "spma/engine.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_set>

namespace spma {

double hit_weight(const PatternStore& store, const Alignment& a, std::size_t col,
                  const Pattern& pattern, std::size_t pos) {
    const Symbol& tok = pattern.symbols[pos];
    if (!hit_allowed(a, col, pattern, pos)) return -1.0;
    const Column& c = a.columns()[col];
    double w = pattern.is_id(pos) ? symbol_cost(store, tok) : 0.0;
    if (!c.matched()) {
        const Entry& e = c.entries.front();
        if (e.row == 0 || a.is_id(e)) w += symbol_cost(store, tok);
    }
    return w;
}

namespace {

void keep_ranked(std::vector<Alignment>& list, Alignment a, std::size_t limit) {
    auto pos = std::upper_bound(list.begin(), list.end(), a, alignment_ranks_before);
    if (static_cast<std::size_t>(pos - list.begin()) >= limit) return;
    list.insert(pos, std::move(a));
    if (list.size() > limit) list.pop_back();
}

struct Partial {
    Alignment alignment;
    double heuristic;
};

bool partial_before(const Partial& x, const Partial& y) {
    if (x.heuristic > y.heuristic + kScoreTolerance) return true;
    if (y.heuristic > x.heuristic + kScoreTolerance) return false;
    return alignment_ranks_before(x.alignment, y.alignment);
}

void keep_partial(std::vector<Partial>& list, Partial p, std::size_t limit) {
    auto pos = std::upper_bound(list.begin(), list.end(), p, partial_before);
    if (static_cast<std::size_t>(pos - list.begin()) >= limit) return;
    list.insert(pos, std::move(p));
    if (list.size() > limit) list.pop_back();
}

std::vector<Partial> diversify(std::vector<Partial> ranked, std::size_t width, std::size_t per_group) {
    std::map<std::vector<std::string>, std::size_t> used;
    std::vector<Partial> out;
    for (auto& p : ranked) {
        if (out.size() == width) break;
        auto ids = p.alignment.pattern_ids();
        std::sort(ids.begin(), ids.end());
        if (++used[ids] > per_group) continue;
        out.push_back(std::move(p));
    }
    return out;
}

// linkable[i][p]: position p of pattern i is an ID-symbol that a hit from some
// store pattern position could join.
std::vector<std::vector<bool>> linkable_ids(const PatternStore& store) {
    const auto& ps = store.patterns();
    std::vector<std::vector<bool>> out(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        out[i].assign(ps[i].size(), false);
        for (std::size_t p = 0; p < ps[i].size(); ++p) {
            if (!ps[i].is_id(p)) continue;
            const bool first = p == 0, last = p + 1 == ps[i].size();
            for (std::size_t j = 0; j < ps.size() && !out[i][p]; ++j)
                for (std::size_t q = 0; q < ps[j].size(); ++q) {
                    if (ps[j].symbols[q] != ps[i].symbols[p]) continue;
                    if (i == j && p == q) continue;
                    if (first && q == 0) continue;
                    if (last && q + 1 == ps[j].size()) continue;
                    out[i][p] = true;
                    break;
                }
        }
    }
    return out;
}

}  // namespace

double pending_bits(const PatternStore& store, const Alignment& a,
                    const std::vector<std::vector<bool>>& linkable) {
    double bits = 0.0;
    for (const auto& e : encoding_entries(a)) {
        const Row& r = a.rows()[e.row];
        auto idx = store.index_of(r.pattern_id());
        if (linkable[idx][e.position]) bits += symbol_cost(store, a.token(e));
    }
    return bits;
}

std::vector<Alignment> build_alignments(const PatternStore& store, std::span<const Symbol> new_symbols,
                                        const EngineParams& params) {
    if (new_symbols.empty()) throw std::invalid_argument("New pattern is empty");
    if (params.beam_width == 0 || params.top_k == 0 || params.alternatives == 0)
        throw std::invalid_argument("beam_width, top_k and alternatives must be >= 1");

    Alignment root(new_symbols);
    if (!store.empty()) compression_difference(store, root);
    std::vector<Alignment> best{root};
    if (store.empty()) return best;

    std::vector<std::shared_ptr<const Pattern>> patterns;
    for (const auto& p : store.patterns()) patterns.push_back(std::make_shared<const Pattern>(p));

    const auto linkable = linkable_ids(store);
    auto heuristic = [&](const Alignment& a) {
        return a.compression_difference + params.pending_credit * pending_bits(store, a, linkable) -
               params.gap_penalty * static_cast<double>(a.fragmentation);
    };

    std::unordered_set<std::string> seen{root.signature()};
    std::vector<Partial> beam{{root, heuristic(root)}};
    MatchParams mp{params.alternatives, 1, params.gap_penalty};

    for (std::size_t stage = 0; stage < params.max_stages && !beam.empty(); ++stage) {
        std::vector<Partial> next;
        for (const auto& [a, _] : beam) {
            for (const auto& p : patterns) {
                if (a.appearances(p->id) >= params.max_appearances) continue;
                HitGrid grid(a.column_count(), p->size());
                bool any = false;
                for (std::size_t c = 0; c < a.column_count(); ++c)
                    for (std::size_t j = 0; j < p->size(); ++j) {
                        double w = hit_weight(store, a, c, *p, j);
                        if (w < 0) continue;
                        grid.allow(c, j, w);
                        any = true;
                    }
                if (!any) continue;
                for (const auto& m : best_chains(grid, mp)) {
                    if (m.score <= kScoreTolerance) continue;
                    Alignment merged = merge(a, p, m);
                    if (!seen.insert(merged.signature()).second) continue;
                    compression_difference(store, merged);
                    double h = heuristic(merged);
                    keep_partial(next, {std::move(merged), h}, params.beam_width * params.per_multiset * 4);
                }
            }
        }
        for (const auto& p : next) keep_ranked(best, p.alignment, params.top_k);
        next = diversify(std::move(next), params.beam_width, params.per_multiset);
        beam = std::move(next);
    }
    return best;
}

}  // namespace spma
