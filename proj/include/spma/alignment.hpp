#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spma/matcher.hpp"
#include "spma/pattern.hpp"

namespace spma {

// One symbol of one row placed in a column.
struct Entry {
    std::size_t row;
    std::size_t position;

    friend bool operator==(const Entry&, const Entry&) = default;
    friend auto operator<=>(const Entry&, const Entry&) = default;
};

struct Column {
    std::vector<Entry> entries;  // sorted by row

    bool matched() const noexcept { return entries.size() >= 2; }
};

// Row 0 is the New pattern; every other row is one appearance of an Old pattern.
struct Row {
    std::shared_ptr<const Pattern> pattern;
    bool is_new = false;
    std::size_t appearance = 0;        // 1-based among rows of the same pattern; 0 for New
    std::vector<std::size_t> columns;  // column index of each source position

    const std::string& pattern_id() const { return pattern->id; }
};

struct Encoding {
    std::vector<Symbol> code;
};

class Alignment {
public:
    Alignment() = default;
    explicit Alignment(std::span<const Symbol> new_symbols);

    const std::vector<Row>& rows() const noexcept { return rows_; }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    std::size_t row_count() const noexcept { return rows_.size(); }
    std::size_t column_count() const noexcept { return columns_.size(); }

    const Symbol& token(std::size_t column) const;
    const Symbol& token(const Entry& e) const { return rows_[e.row].pattern->symbols[e.position]; }
    bool is_id(const Entry& e) const { return !rows_[e.row].is_new && rows_[e.row].pattern->is_id(e.position); }
    std::size_t appearances(std::string_view pattern_id) const;

    // Old pattern ids of rows 1.., in row order.
    std::vector<std::string> pattern_ids() const;
    std::vector<Symbol> new_symbols() const { return rows_.at(0).pattern->symbols; }

    // Structural identity independent of row insertion order.
    std::string signature() const;

    double matched_new_bits = 0.0;
    double encoding_bits = 0.0;
    double compression_difference = 0.0;
    // Gap openings summed over the pairwise matches merged so far.
    std::size_t fragmentation = 0;

    friend Alignment merge(const Alignment&, std::shared_ptr<const Pattern>, const MatchResult&);
    friend Alignment from_parts(std::vector<Row>, std::vector<Column>);

private:
    std::vector<Row> rows_;
    std::vector<Column> columns_;
};

// False when the token differs, when the column already holds the same position of
// another appearance of the same pattern, or when the hit would put two Old rows'
// first symbols (or two last symbols) in one column. Old rows link boundary to
// interior, as a pattern's head links to a reference inside another pattern.
bool hit_allowed(const Alignment& alignment, std::size_t column, const Pattern& pattern,
                 std::size_t position);

// Adds one appearance of `pattern`. Hits are (column index, pattern position).
// Unmatched pattern symbols become single-entry columns adjacent to their nearest
// preceding hit column (or just before the first hit).
// Throws MergeRejected for crossing, out-of-range, or disallowed hits.
Alignment merge(const Alignment& alignment, std::shared_ptr<const Pattern> pattern,
                const MatchResult& match);
Alignment merge(const Alignment& alignment, const Pattern& pattern, const MatchResult& match);

// Builds an alignment from explicit rows and columns; rows' column maps are rebuilt.
// The result is not validated; see alignment_violations.
Alignment from_parts(std::vector<Row> rows, std::vector<Column> columns);

// Empty when the alignment satisfies every structural invariant.
std::vector<std::string> alignment_violations(const Alignment& alignment);

// ID-symbols of Old rows in unmatched columns, in column order. Appearances of one
// pattern that each match New symbols and whose ID-symbols share columns form a
// single recursive unit, which contributes each ID token once.
Encoding derive_encoding(const Alignment& alignment);
// The entries whose tokens form derive_encoding's code, in the same order.
std::vector<Entry> encoding_entries(const Alignment& alignment);

// Sets and returns matched_new_bits - encoding_bits.
double compression_difference(const PatternStore& store, Alignment& alignment);

std::vector<double> relative_probabilities(std::span<const double> cds);
std::vector<double> relative_probabilities(std::span<const Alignment> alignments);

struct Inferred {
    Symbol token;
    std::string pattern_id;

    friend bool operator==(const Inferred&, const Inferred&) = default;
};

// Contents symbols of Old rows in unmatched columns, in column order.
std::vector<Inferred> infer_unseen(const Alignment& alignment);

// Ranking used by the engine: higher CD, fewer rows, sorted pattern ids, smaller
// total column span of the Old rows, lower fragmentation, signature.
bool alignment_ranks_before(const Alignment& a, const Alignment& b);

}  // namespace spma
