#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spma/alignment.hpp"
#include "spma/pattern.hpp"

namespace spma {

struct EngineParams {
    std::size_t beam_width = 30;
    std::size_t max_stages = 12;
    std::size_t top_k = 5;
    std::size_t max_appearances = 10;
    std::size_t alternatives = 10;  // pairwise matches tried per (alignment, pattern)
    double gap_penalty = 0.1;      // applied to pairwise proposals only, never to CD
    // Beam ranking credits this fraction of the cost of code symbols that some
    // store pattern could still link. Final ranking always uses the plain CD.
    double pending_credit = 0.5;
    // At most this many beam survivors may share one multiset of pattern ids.
    std::size_t per_multiset = 3;
};

// Staged construction: every stage matches each store pattern against the columns
// of every beam survivor and merges the best pairwise matches as one new row.
// Returns at most top_k scored alignments, best first; the row-0-only alignment
// always competes.
std::vector<Alignment> build_alignments(const PatternStore& store, std::span<const Symbol> new_symbols,
                                        const EngineParams& params = {});

// Bits of code symbols that some store pattern could still link.
double pending_bits(const PatternStore& store, const Alignment& alignment,
                    const std::vector<std::vector<bool>>& linkable);

// Weight of hitting column `col` with position `pos` of `pattern`, or a negative value
// when the hit is not allowed.
double hit_weight(const PatternStore& store, const Alignment& alignment, std::size_t col,
                  const Pattern& pattern, std::size_t pos);

}  // namespace spma
