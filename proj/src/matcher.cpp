#include "spma/matcher.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "spma/errors.hpp"

namespace spma {

bool ranks_before(const MatchResult& a, const MatchResult& b) {
    if (a.score > b.score + kScoreTolerance) return true;
    if (b.score > a.score + kScoreTolerance) return false;
    if (a.hits.size() != b.hits.size()) return a.hits.size() < b.hits.size();
    return a.hits < b.hits;
}

std::size_t gap_openings(std::span<const Hit> hits) {
    std::size_t gaps = 0;
    for (std::size_t k = 1; k < hits.size(); ++k) {
        if (hits[k].driving_index != hits[k - 1].driving_index + 1 ||
            hits[k].target_index != hits[k - 1].target_index + 1)
            ++gaps;
    }
    return gaps;
}

HitGrid::HitGrid(std::size_t driving_len, std::size_t target_len)
    : rows_(driving_len), cols_(target_len), weight_(driving_len * target_len, 0.0),
      allowed_(driving_len * target_len, 0) {}

void HitGrid::allow(std::size_t d, std::size_t t, double weight) {
    if (d >= rows_ || t >= cols_) throw std::out_of_range("hit outside grid");
    weight_[d * cols_ + t] = weight;
    allowed_[d * cols_ + t] = 1;
}

HitGrid HitGrid::from_tokens(const PatternStore& store, std::span<const Symbol> driving,
                             std::span<const Symbol> target) {
    HitGrid grid(driving.size(), target.size());
    for (std::size_t d = 0; d < driving.size(); ++d)
        for (std::size_t t = 0; t < target.size(); ++t)
            if (driving[d] == target[t]) grid.allow(d, t, symbol_cost(store, driving[d]));
    return grid;
}

double chain_score(const HitGrid& grid, std::span<const Hit> hits, double gap_penalty) {
    double score = 0.0;
    for (std::size_t k = 0; k < hits.size(); ++k) {
        const Hit& h = hits[k];
        score += grid.weight(h.driving_index, h.target_index);
        if (k > 0 && (h.driving_index != hits[k - 1].driving_index + 1 ||
                      h.target_index != hits[k - 1].target_index + 1))
            score -= gap_penalty;
    }
    return score;
}

namespace {

using Frontier = std::vector<MatchResult>;

// Inserts into a ranked frontier of at most k entries, keeping one copy per hit list.
void offer(Frontier& f, MatchResult cand, std::size_t k) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].hits == cand.hits) {
            if (!ranks_before(cand, f[i])) return;
            f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    auto pos = f.begin();
    while (pos != f.end() && !ranks_before(cand, *pos)) ++pos;
    if (static_cast<std::size_t>(pos - f.begin()) >= k) return;
    f.insert(pos, std::move(cand));
    if (f.size() > k) f.pop_back();
}

MatchResult extend(const MatchResult& base, Hit h, double w, double penalty) {
    MatchResult r;
    r.hits.reserve(base.hits.size() + 1);
    r.hits = base.hits;
    r.hits.push_back(h);
    r.score = base.score + w - penalty;
    return r;
}

}  // namespace

std::vector<MatchResult> best_chains(const HitGrid& grid, const MatchParams& params) {
    if (params.max_alternatives == 0) throw std::invalid_argument("max_alternatives must be >= 1");
    const std::size_t R = grid.driving_len(), C = grid.target_len();
    const std::size_t K = params.max_alternatives;
    if (R == 0 || C == 0) return {};

    // prefix[j] holds the best chains ending strictly inside rows [0,i) x cols [0,j).
    std::vector<Frontier> prefix_prev(C + 1), prefix_cur(C + 1);
    std::vector<Frontier> cell_prev(C), cell_cur(C);

    for (std::size_t i = 0; i < R; ++i) {
        // Advance prefix to cover rows [0,i): merge the previous prefix row with row i-1 cells.
        if (i > 0) {
            prefix_cur[0].clear();
            for (std::size_t j = 1; j <= C; ++j) {
                Frontier f = prefix_prev[j];
                for (const auto& m : prefix_cur[j - 1]) offer(f, m, K);
                for (const auto& m : cell_prev[j - 1]) offer(f, m, K);
                prefix_cur[j] = std::move(f);
            }
            std::swap(prefix_prev, prefix_cur);
        }
        for (std::size_t j = 0; j < C; ++j) {
            Frontier& out = cell_cur[j];
            out.clear();
            if (!grid.allowed(i, j)) continue;
            const Hit h{i, j};
            const double w = grid.weight(i, j);
            offer(out, MatchResult{{h}, w}, K);
            if (i > 0 && j > 0) {
                for (const auto& m : cell_prev[j - 1]) offer(out, extend(m, h, w, 0.0), K);
                for (const auto& m : prefix_prev[j]) {
                    const Hit& last = m.hits.back();
                    bool contiguous = last.driving_index + 1 == i && last.target_index + 1 == j;
                    offer(out, extend(m, h, w, contiguous ? 0.0 : params.gap_penalty), K);
                }
            }
        }
        std::swap(cell_prev, cell_cur);
    }

    // Whole-grid frontier: the last prefix row plus the last row of cells.
    Frontier all;
    std::size_t keep = K;
    if (params.min_hits > 1) keep = K * 4;
    for (std::size_t j = 0; j <= C; ++j)
        for (const auto& m : prefix_prev[j]) offer(all, m, keep);
    for (std::size_t j = 0; j < C; ++j)
        for (const auto& m : cell_prev[j]) offer(all, m, keep);

    Frontier out;
    for (auto& m : all) {
        if (m.hits.size() < params.min_hits) continue;
        if (out.size() == K) break;
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<MatchResult> all_chains(const HitGrid& grid, double gap_penalty) {
    std::vector<MatchResult> out;
    const std::size_t R = grid.driving_len(), C = grid.target_len();
    std::vector<Hit> stack;

    auto rec = [&](auto&& self, std::size_t d0, std::size_t t0, double score) -> void {
        for (std::size_t d = d0; d < R; ++d) {
            for (std::size_t t = t0; t < C; ++t) {
                if (!grid.allowed(d, t)) continue;
                double s = score + grid.weight(d, t);
                if (!stack.empty()) {
                    const Hit& last = stack.back();
                    if (last.driving_index + 1 != d || last.target_index + 1 != t) s -= gap_penalty;
                }
                stack.push_back({d, t});
                out.push_back({stack, s});
                self(self, d + 1, t + 1, s);
                stack.pop_back();
            }
        }
    };
    rec(rec, 0, 0, 0.0);
    std::stable_sort(out.begin(), out.end(), ranks_before);
    return out;
}

std::vector<MatchResult> find_matches(const PatternStore& store, std::span<const Symbol> driving,
                                      std::span<const Symbol> target, const MatchParams& params) {
    if (params.max_alternatives == 0) throw std::invalid_argument("max_alternatives must be >= 1");
    if (driving.empty() || target.empty()) return {};
    return best_chains(HitGrid::from_tokens(store, driving, target), params);
}

std::vector<MatchResult> exhaustive_matches(const PatternStore& store,
                                            std::span<const Symbol> driving,
                                            std::span<const Symbol> target, double gap_penalty) {
    if (driving.size() * target.size() > kExhaustiveLimit)
        throw SizeError("exhaustive enumeration limited to " + std::to_string(kExhaustiveLimit) +
                        " cells, got " + std::to_string(driving.size() * target.size()));
    if (driving.empty() || target.empty()) return {};
    return all_chains(HitGrid::from_tokens(store, driving, target), gap_penalty);
}

}  // namespace spma
