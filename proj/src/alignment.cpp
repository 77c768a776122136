#include "spma/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "spma/errors.hpp"

namespace spma {

namespace {

constexpr std::size_t kUnplaced = std::numeric_limits<std::size_t>::max();

void rebuild_column_maps(std::vector<Row>& rows, const std::vector<Column>& columns) {
    for (auto& r : rows) r.columns.assign(r.pattern ? r.pattern->size() : 0, kUnplaced);
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (const auto& e : columns[c].entries)
            if (e.row < rows.size() && e.position < rows[e.row].columns.size())
                rows[e.row].columns[e.position] = c;
}

std::shared_ptr<const Pattern> new_row_pattern(std::span<const Symbol> symbols) {
    auto p = std::make_shared<Pattern>();
    p->id = "New";
    p->symbols.assign(symbols.begin(), symbols.end());
    p->id_flags.assign(symbols.size(), false);
    return p;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

Alignment::Alignment(std::span<const Symbol> new_symbols) {
    Row r;
    r.pattern = new_row_pattern(new_symbols);
    r.is_new = true;
    rows_.push_back(std::move(r));
    for (std::size_t i = 0; i < new_symbols.size(); ++i) columns_.push_back({{{0, i}}});
    rebuild_column_maps(rows_, columns_);
}

const Symbol& Alignment::token(std::size_t column) const {
    return token(columns_.at(column).entries.at(0));
}

std::size_t Alignment::appearances(std::string_view pattern_id) const {
    std::size_t n = 0;
    for (std::size_t r = 1; r < rows_.size(); ++r)
        if (rows_[r].pattern_id() == pattern_id) ++n;
    return n;
}

std::vector<std::string> Alignment::pattern_ids() const {
    std::vector<std::string> ids;
    for (std::size_t r = 1; r < rows_.size(); ++r) ids.push_back(rows_[r].pattern_id());
    return ids;
}

std::string Alignment::signature() const {
    // Rows are described by their links rather than by column indices, so the
    // relative order of adjacent unmatched columns does not matter. Two rounds of
    // neighbour refinement distinguish appearances of the same pattern.
    const std::size_t n = rows_.size();
    std::vector<std::string> label(n);
    for (std::size_t r = 0; r < n; ++r) label[r] = r == 0 ? "New" : rows_[r].pattern_id();
    for (int round = 0; round < 2; ++round) {
        std::vector<std::string> next(n);
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<std::string> links;
            for (std::size_t p = 0; p < rows_[r].columns.size(); ++p) {
                for (const auto& e : columns_[rows_[r].columns[p]].entries) {
                    if (e.row == r) continue;
                    links.push_back(std::to_string(p) + ">" + label[e.row] + "@" +
                                    std::to_string(e.position));
                }
            }
            std::sort(links.begin(), links.end());
            next[r] = label[r] + "{";
            for (const auto& l : links) next[r] += l + ";";
            next[r] += "}";
        }
        label = std::move(next);
    }
    std::sort(label.begin() + (n ? 1 : 0), label.end());
    std::string out;
    for (const auto& l : label) out += l + "|";
    return out;
}

Alignment from_parts(std::vector<Row> rows, std::vector<Column> columns) {
    Alignment a;
    rebuild_column_maps(rows, columns);
    a.rows_ = std::move(rows);
    a.columns_ = std::move(columns);
    return a;
}

bool hit_allowed(const Alignment& a, std::size_t column, const Pattern& pattern,
                 std::size_t position) {
    if (a.token(column) != pattern.symbols[position]) return false;
    const bool first = position == 0, last = position + 1 == pattern.size();
    for (const auto& e : a.columns()[column].entries) {
        const Row& r = a.rows()[e.row];
        if (r.is_new) continue;
        if (e.position == position && r.pattern_id() == pattern.id) return false;
        if (first && e.position == 0) return false;
        if (last && e.position + 1 == r.pattern->size()) return false;
    }
    return true;
}

Alignment merge(const Alignment& alignment, std::shared_ptr<const Pattern> pattern,
                const MatchResult& match) {
    if (!pattern) throw MergeRejected("null pattern");
    const auto& hits = match.hits;
    if (hits.empty()) throw MergeRejected("match has no hits");
    const std::size_t ncols = alignment.column_count();
    for (std::size_t k = 0; k < hits.size(); ++k) {
        const Hit& h = hits[k];
        if (h.driving_index >= ncols || h.target_index >= pattern->size())
            throw MergeRejected("hit out of range");
        if (k > 0 && (h.driving_index <= hits[k - 1].driving_index ||
                      h.target_index <= hits[k - 1].target_index))
            throw MergeRejected("hits cross the existing column order");
        if (alignment.token(h.driving_index) != pattern->symbols[h.target_index])
            throw MergeRejected("hit joins unequal tokens '" + alignment.token(h.driving_index).str() +
                                "' and '" + pattern->symbols[h.target_index].str() + "'");
        if (!hit_allowed(alignment, h.driving_index, *pattern, h.target_index))
            throw MergeRejected("hit not allowed at column " + std::to_string(h.driving_index));
    }

    const std::size_t r = alignment.row_count();
    std::vector<std::vector<std::size_t>> before(ncols), after(ncols);
    std::vector<std::size_t> hit_at(ncols, kUnplaced);
    for (std::size_t t = 0; t < hits.front().target_index; ++t)
        before[hits.front().driving_index].push_back(t);
    for (std::size_t k = 0; k < hits.size(); ++k) {
        hit_at[hits[k].driving_index] = hits[k].target_index;
        std::size_t end = k + 1 < hits.size() ? hits[k + 1].target_index : pattern->size();
        for (std::size_t t = hits[k].target_index + 1; t < end; ++t)
            after[hits[k].driving_index].push_back(t);
    }

    std::vector<Column> cols;
    cols.reserve(ncols + pattern->size());
    for (std::size_t c = 0; c < ncols; ++c) {
        for (auto t : before[c]) cols.push_back({{{r, t}}});
        Column col = alignment.columns()[c];
        if (hit_at[c] != kUnplaced) col.entries.push_back({r, hit_at[c]});
        cols.push_back(std::move(col));
        for (auto t : after[c]) cols.push_back({{{r, t}}});
    }

    std::vector<Row> rows = alignment.rows();
    Row row;
    row.appearance = alignment.appearances(pattern->id) + 1;
    row.pattern = std::move(pattern);
    rows.push_back(std::move(row));
    Alignment out = from_parts(std::move(rows), std::move(cols));
    out.fragmentation = alignment.fragmentation + gap_openings(hits);
    return out;
}

Alignment merge(const Alignment& alignment, const Pattern& pattern, const MatchResult& match) {
    return merge(alignment, std::make_shared<const Pattern>(pattern), match);
}

std::vector<std::string> alignment_violations(const Alignment& a) {
    std::vector<std::string> out;
    const auto& rows = a.rows();
    const auto& cols = a.columns();
    if (rows.empty() || !rows[0].is_new) {
        out.push_back("row 0 is not the New pattern");
        return out;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].pattern) {
            out.push_back("row " + std::to_string(r) + " has no pattern");
            return out;
        }
        if (r > 0 && rows[r].is_new) out.push_back("row " + std::to_string(r) + " marked New");
    }
    std::vector<std::vector<std::size_t>> seen(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) seen[r].assign(rows[r].pattern->size(), 0);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& es = cols[c].entries;
        if (es.empty()) {
            out.push_back("column " + std::to_string(c) + " is empty");
            continue;
        }
        std::set<std::size_t> rows_here;
        for (const auto& e : es) {
            if (e.row >= rows.size() || e.position >= rows[e.row].pattern->size()) {
                out.push_back("column " + std::to_string(c) + " has an out-of-range entry");
                continue;
            }
            if (!rows_here.insert(e.row).second)
                out.push_back("column " + std::to_string(c) + " holds row " +
                              std::to_string(e.row) + " twice");
            ++seen[e.row][e.position];
            for (const auto& o : es) {
                if (o.row >= e.row || o.row >= rows.size() || rows[o.row].is_new || rows[e.row].is_new)
                    continue;
                const auto n_o = rows[o.row].pattern->size(), n_e = rows[e.row].pattern->size();
                if (o.position == e.position && rows[o.row].pattern_id() == rows[e.row].pattern_id())
                    out.push_back("column " + std::to_string(c) + " aligns a pattern position with itself");
                if ((o.position == 0 && e.position == 0) ||
                    (o.position + 1 == n_o && e.position + 1 == n_e))
                    out.push_back("column " + std::to_string(c) + " joins two pattern boundaries");
            }
            if (a.token(e) != a.token(es.front()))
                out.push_back("column " + std::to_string(c) + " mixes tokens");
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t p = 0; p < seen[r].size(); ++p) {
            if (seen[r][p] != 1)
                out.push_back("row " + std::to_string(r) + " position " + std::to_string(p) +
                              " placed " + std::to_string(seen[r][p]) + " times");
        }
        const auto& cm = rows[r].columns;
        for (std::size_t p = 1; p < cm.size(); ++p)
            if (cm[p] != kUnplaced && cm[p - 1] != kUnplaced && cm[p] <= cm[p - 1])
                out.push_back("row " + std::to_string(r) + " crosses column order at position " +
                              std::to_string(p));
    }
    return out;
}

std::vector<Entry> encoding_entries(const Alignment& a) {
    const auto& rows = a.rows();
    std::vector<bool> covers_new(rows.size(), false);
    for (const auto& col : a.columns()) {
        bool has_new = false;
        for (const auto& e : col.entries) has_new = has_new || e.row == 0;
        if (has_new)
            for (const auto& e : col.entries) covers_new[e.row] = true;
    }
    UnionFind uf(rows.size());
    for (const auto& col : a.columns()) {
        const auto& es = col.entries;
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j)
                if (a.is_id(es[i]) && a.is_id(es[j]) && covers_new[es[i].row] &&
                    covers_new[es[j].row] &&
                    rows[es[i].row].pattern_id() == rows[es[j].row].pattern_id())
                    uf.unite(es[i].row, es[j].row);
    }
    std::vector<Entry> out;
    std::set<std::pair<std::size_t, Symbol>> emitted;
    for (const auto& col : a.columns()) {
        if (col.matched()) continue;
        const Entry& e = col.entries.front();
        if (!a.is_id(e)) continue;
        if (emitted.emplace(uf.find(e.row), a.token(e)).second) out.push_back(e);
    }
    return out;
}

Encoding derive_encoding(const Alignment& a) {
    Encoding enc;
    for (const auto& e : encoding_entries(a)) enc.code.push_back(a.token(e));
    return enc;
}

double compression_difference(const PatternStore& store, Alignment& a) {
    double matched = 0.0;
    for (const auto& col : a.columns()) {
        if (!col.matched()) continue;
        for (const auto& e : col.entries)
            if (e.row == 0) matched += symbol_cost(store, a.token(e));
    }
    double code = 0.0;
    for (const auto& s : derive_encoding(a).code) code += symbol_cost(store, s);
    a.matched_new_bits = matched;
    a.encoding_bits = code;
    a.compression_difference = matched - code;
    return a.compression_difference;
}

std::vector<double> relative_probabilities(std::span<const double> cds) {
    if (cds.empty()) throw std::invalid_argument("relative_probabilities needs at least one alignment");
    const double top = *std::max_element(cds.begin(), cds.end());
    std::vector<double> p;
    p.reserve(cds.size());
    double sum = 0.0;
    for (double cd : cds) sum += p.emplace_back(std::exp2(cd - top));
    for (auto& x : p) x /= sum;
    return p;
}

std::vector<double> relative_probabilities(std::span<const Alignment> alignments) {
    std::vector<double> cds;
    for (const auto& a : alignments) cds.push_back(a.compression_difference);
    return relative_probabilities(cds);
}

std::vector<Inferred> infer_unseen(const Alignment& a) {
    std::vector<Inferred> out;
    for (const auto& col : a.columns()) {
        if (col.matched()) continue;
        const Entry& e = col.entries.front();
        if (e.row == 0 || a.is_id(e)) continue;
        out.push_back({a.token(e), a.rows()[e.row].pattern_id()});
    }
    return out;
}

namespace {

// Columns covered by the Old rows, summed. Among otherwise equal alignments the
// more compact one links nearby symbols rather than distant copies of a token.
std::size_t row_spread(const Alignment& a) {
    std::size_t total = 0;
    for (std::size_t r = 1; r < a.row_count(); ++r) {
        const auto& cols = a.rows()[r].columns;
        total += cols.back() - cols.front();
    }
    return total;
}

}  // namespace

bool alignment_ranks_before(const Alignment& a, const Alignment& b) {
    if (a.compression_difference > b.compression_difference + kScoreTolerance) return true;
    if (b.compression_difference > a.compression_difference + kScoreTolerance) return false;
    if (a.row_count() != b.row_count()) return a.row_count() < b.row_count();
    auto ia = a.pattern_ids(), ib = b.pattern_ids();
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    if (ia != ib) return ia < ib;
    if (const auto sa = row_spread(a), sb = row_spread(b); sa != sb) return sa < sb;
    if (a.fragmentation != b.fragmentation) return a.fragmentation < b.fragmentation;
    return a.signature() < b.signature();
}

}  // namespace spma
