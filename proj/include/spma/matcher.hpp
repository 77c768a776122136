#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spma/pattern.hpp"

namespace spma {

struct Hit {
    std::size_t driving_index;
    std::size_t target_index;

    friend bool operator==(const Hit&, const Hit&) = default;
    friend auto operator<=>(const Hit&, const Hit&) = default;
};

// Order-preserving set of hits; score is in bits.
struct MatchResult {
    std::vector<Hit> hits;
    double score = 0.0;
};

struct MatchParams {
    std::size_t max_alternatives = 5;
    std::size_t min_hits = 1;
    double gap_penalty = 0.0;
};

// Scores within this distance are ties.
inline constexpr double kScoreTolerance = 1e-9;

// Ranking: higher score, then fewer hits, then lexicographically smaller hit list.
bool ranks_before(const MatchResult& a, const MatchResult& b);

// Number of consecutive hit pairs that skip a position on either side.
std::size_t gap_openings(std::span<const Hit> hits);

// Dense grid of candidate hits. Cells not marked allowed can never be hit.
class HitGrid {
public:
    HitGrid(std::size_t driving_len, std::size_t target_len);

    std::size_t driving_len() const noexcept { return rows_; }
    std::size_t target_len() const noexcept { return cols_; }

    void allow(std::size_t d, std::size_t t, double weight);
    bool allowed(std::size_t d, std::size_t t) const { return allowed_[d * cols_ + t] != 0; }
    double weight(std::size_t d, std::size_t t) const { return weight_[d * cols_ + t]; }

    // Hits allowed where tokens are equal, weighted by store bit-cost.
    static HitGrid from_tokens(const PatternStore& store, std::span<const Symbol> driving,
                               std::span<const Symbol> target);

private:
    std::size_t rows_, cols_;
    std::vector<double> weight_;
    std::vector<std::uint8_t> allowed_;
};

// Score of a hit list under a grid: summed weights minus gap penalties.
double chain_score(const HitGrid& grid, std::span<const Hit> hits, double gap_penalty);

// K-best chains by dynamic programming; each cell keeps a frontier of
// max_alternatives chains ending there.
std::vector<MatchResult> best_chains(const HitGrid& grid, const MatchParams& params);

// Every non-empty order-preserving chain, ranked. Exponential; callers bound the size.
std::vector<MatchResult> all_chains(const HitGrid& grid, double gap_penalty);

std::vector<MatchResult> find_matches(const PatternStore& store, std::span<const Symbol> driving,
                                      std::span<const Symbol> target,
                                      const MatchParams& params = {});

// Complete enumeration; refuses with SizeError when len(driving)*len(target) > 64.
inline constexpr std::size_t kExhaustiveLimit = 64;
std::vector<MatchResult> exhaustive_matches(const PatternStore& store,
                                            std::span<const Symbol> driving,
                                            std::span<const Symbol> target,
                                            double gap_penalty = 0.0);

}  // namespace spma
