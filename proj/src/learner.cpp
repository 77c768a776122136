#include "spma/learner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace spma {

IdMinter::IdMinter(std::span<const Sequence> corpus) {
    for (const auto& seq : corpus)
        for (const auto& s : seq) taken_.insert(s.str());
}

bool IdMinter::usable(const std::string& token) const {
    return !taken_.count(token) && !taken_.count("#" + token);
}

std::string IdMinter::next_class() {
    for (;;) {
        const std::size_t k = class_index_++;
        std::string token(1, static_cast<char>('A' + k % 26));
        if (k >= 26) token += std::to_string(k / 26);
        if (!usable(token)) continue;
        taken_.insert(token);
        taken_.insert("#" + token);
        return token;
    }
}

std::string IdMinter::next_number() {
    for (;;) {
        std::string token = std::to_string(++number_);
        if (!usable(token)) continue;
        taken_.insert(token);
        return token;
    }
}

namespace {

Pattern assemble(std::string id, const std::vector<std::pair<Symbol, bool>>& parts) {
    Pattern p;
    p.id = std::move(id);
    p.origin = Origin::learned;
    for (const auto& [s, is_id] : parts) {
        p.symbols.push_back(s);
        p.id_flags.push_back(is_id);
    }
    return p;
}

std::vector<Symbol> contents_of(const Pattern& p) {
    std::vector<Symbol> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!p.is_id(i)) out.push_back(p.symbols[i]);
    return out;
}

}  // namespace

Pattern make_unit_pattern(IdMinter& minter, std::span<const Symbol> contents, std::string_view class_token) {
    const std::string cls = class_token.empty() ? minter.next_class() : std::string(class_token);
    const std::string num = minter.next_number();
    std::vector<std::pair<Symbol, bool>> parts{{Symbol(cls), true}, {Symbol(num), true}};
    for (const auto& s : contents) parts.push_back({s, false});
    parts.push_back({Symbol("#" + cls), true});
    return assemble(cls + "_" + num, parts);
}

Derivation derive_patterns(const Alignment& a, IdMinter& minter) {
    if (a.row_count() < 2) throw std::invalid_argument("derive_patterns needs at least 2 rows");

    enum class Kind { matched, new_only, old_only };
    struct Cell {
        std::size_t column;
        Kind kind;
        std::size_t row;
    };
    Derivation out;
    std::vector<Cell> cells;
    for (std::size_t c = 0; c < a.column_count(); ++c) {
        const auto& es = a.columns()[c].entries;
        if (std::all_of(es.begin(), es.end(), [&](const Entry& e) { return a.is_id(e); })) {
            out.trace.skipped_columns.push_back(c);
            continue;
        }
        if (es.size() >= 2)
            cells.push_back({c, Kind::matched, SegmentRun::kShared});
        else
            cells.push_back({c, es[0].row == 0 ? Kind::new_only : Kind::old_only, es[0].row});
    }

    // Maximal runs of one kind (and, when unmatched, one row).
    std::vector<Kind> kinds;
    for (const auto& cell : cells) {
        auto& runs = out.trace.runs;
        const bool matched = cell.kind == Kind::matched;
        if (runs.empty() || runs.back().matched != matched || runs.back().row != cell.row) {
            runs.push_back({matched, cell.row, {}, {}, {}});
            kinds.push_back(cell.kind);
        }
        runs.back().columns.push_back(cell.column);
        runs.back().tokens.push_back(a.token(cell.column));
    }
    auto& runs = out.trace.runs;

    for (std::size_t r = 1; r < a.row_count(); ++r) {
        const Row& row = a.rows()[r];
        for (std::size_t p = 0; p < row.pattern->size(); ++p)
            if (!row.pattern->is_id(p)) {
                const auto& id = row.pattern_id();
                if (std::find(out.superseded.begin(), out.superseded.end(), id) == out.superseded.end())
                    out.superseded.push_back(id);
                break;
            }
    }

    const bool any_matched = std::any_of(runs.begin(), runs.end(), [](const SegmentRun& r) { return r.matched; });
    if (!any_matched) {
        out.degenerate = true;
        out.superseded.clear();
        Pattern copy = make_unit_pattern(minter, a.new_symbols());
        for (auto& run : runs)
            if (run.row == 0) run.pattern_ids.push_back(copy.id);
        out.patterns.push_back(std::move(copy));
        for (std::size_t r = 1; r < a.row_count(); ++r) {
            const auto& p = *a.rows()[r].pattern;
            if (std::none_of(out.patterns.begin(), out.patterns.end(),
                             [&](const Pattern& q) { return q.id == p.id; }))
                out.patterns.push_back(p);
        }
        for (auto& run : runs)
            if (run.row != 0) run.pattern_ids.push_back(a.rows()[run.row].pattern_id());
        return out;
    }

    // Elements in column order: a matched run, or a slot of consecutive unmatched runs.
    struct Element {
        bool matched;
        std::vector<std::size_t> run_indices;
        std::vector<Symbol> new_side, old_side;
    };
    std::vector<Element> elements;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].matched || elements.empty() || elements.back().matched)
            elements.push_back({runs[i].matched, {}, {}, {}});
        auto& el = elements.back();
        el.run_indices.push_back(i);
        if (runs[i].matched) continue;
        auto& side = kinds[i] == Kind::new_only ? el.new_side : el.old_side;
        side.insert(side.end(), runs[i].tokens.begin(), runs[i].tokens.end());
    }

    const bool two_sided = std::any_of(elements.begin(), elements.end(), [](const Element& e) {
        return !e.matched && !e.new_side.empty() && !e.old_side.empty();
    });
    if (!two_sided) {
        std::vector<Symbol> all;
        for (const auto& run : runs) all.insert(all.end(), run.tokens.begin(), run.tokens.end());
        Pattern unified = make_unit_pattern(minter, all);
        for (auto& run : runs) run.pattern_ids.push_back(unified.id);
        out.patterns.push_back(std::move(unified));
        return out;
    }

    std::vector<std::string> classes;
    for (auto& el : elements) {
        const std::string cls = minter.next_class();
        classes.push_back(cls);
        auto mint = [&](const std::vector<Symbol>& tokens, std::optional<Kind> side) {
            Pattern p = make_unit_pattern(minter, tokens, cls);
            for (std::size_t i : el.run_indices)
                if (!side || kinds[i] == *side) runs[i].pattern_ids.push_back(p.id);
            out.patterns.push_back(std::move(p));
        };
        if (el.matched) {
            mint(runs[el.run_indices.front()].tokens, std::nullopt);
            continue;
        }
        if (!el.old_side.empty()) mint(el.old_side, Kind::old_only);
        if (!el.new_side.empty()) mint(el.new_side, Kind::new_only);
    }
    const std::string top = minter.next_class();
    const std::string num = minter.next_number();
    std::vector<std::pair<Symbol, bool>> parts{{Symbol(top), true}, {Symbol(num), true}};
    for (const auto& cls : classes) {
        parts.push_back({Symbol(cls), true});
        parts.push_back({Symbol("#" + cls), true});
    }
    parts.push_back({Symbol("#" + top), true});
    out.patterns.push_back(assemble(top + "_" + num, parts));
    return out;
}

std::string GrammarCandidate::key() const {
    std::vector<std::string> parts;
    for (const auto& p : patterns) parts.push_back(std::to_string(p.frequency) + " " + pattern_body(p));
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& s : parts) out += s + '\n';
    return out;
}

double grammar_size(const PatternStore& costs, std::span<const Pattern> patterns) {
    if (patterns.empty()) return 0.0;
    double g = 0.0;
    for (const auto& p : patterns) g += pattern_cost(costs, p);
    return g + static_cast<double>(patterns.size()) * std::log2(static_cast<double>(patterns.size()) + 1.0);
}

double grammar_size(const PatternStore& candidate) { return grammar_size(candidate, candidate.patterns()); }

RawCosts::RawCosts(std::span<const Sequence> corpus) {
    std::vector<Pattern> ps;
    for (const auto& seq : corpus) {
        if (seq.empty()) continue;
        Pattern p;
        p.id = "s" + std::to_string(ps.size());
        p.symbols = seq;
        p.id_flags.assign(seq.size(), false);
        ps.push_back(std::move(p));
    }
    table_ = PatternStore(std::move(ps));
}

double RawCosts::cost(const Symbol& token) const { return symbol_cost(table_, token); }

namespace {

double unmatched_new_bits(const Alignment& a, const RawCosts& raw) {
    double bits = 0.0;
    for (const auto& col : a.columns())
        if (!col.matched() && col.entries.front().row == 0) bits += raw.cost(a.token(col.entries.front()));
    return bits;
}

}  // namespace

SequenceEncoding encode_sequence(const PatternStore& candidate, const Sequence& sequence, const RawCosts& raw,
                                 const EngineParams& params) {
    SequenceEncoding out{0.0, 0.0, Alignment(sequence), Alignment(sequence)};
    out.unmatched_bits = unmatched_new_bits(out.best, raw);
    if (candidate.empty() || sequence.empty()) return out;
    bool have_structural = false;
    for (auto& a : build_alignments(candidate, sequence, params)) {
        if (!have_structural && a.row_count() >= 2) {
            out.structural = a;
            have_structural = true;
        }
        const double unmatched = unmatched_new_bits(a, raw);
        if (a.encoding_bits + unmatched < out.encoding_bits + out.unmatched_bits - kScoreTolerance) {
            out.encoding_bits = a.encoding_bits;
            out.unmatched_bits = unmatched;
            out.best = std::move(a);
        }
    }
    return out;
}

double corpus_encoding_size(const PatternStore& candidate, std::span<const Sequence> corpus,
                            const EngineParams& params) {
    if (corpus.empty()) return 0.0;
    RawCosts raw(corpus);
    double e = 0.0;
    for (const auto& seq : corpus) {
        auto enc = encode_sequence(candidate, seq, raw, params);
        e += enc.encoding_bits + enc.unmatched_bits;
    }
    return e;
}

namespace {

bool candidate_before(const GrammarCandidate& x, const GrammarCandidate& y) {
    if (x.T < y.T - kScoreTolerance) return true;
    if (y.T < x.T - kScoreTolerance) return false;
    if (x.patterns.size() != y.patterns.size()) return x.patterns.size() < y.patterns.size();
    return x.key() < y.key();
}

// Patterns of `row` whose contents all sit in matched columns.
bool fully_matched(const Alignment& a, std::size_t row) {
    const Row& r = a.rows()[row];
    for (std::size_t p = 0; p < r.pattern->size(); ++p)
        if (!r.pattern->is_id(p) && !a.columns()[r.columns[p]].matched()) return false;
    return true;
}

class Learner {
public:
    Learner(std::span<const Sequence> corpus, const LearnParams& params)
        : corpus_(corpus), params_(params), minter_(corpus), raw_(corpus) {}

    std::vector<GrammarCandidate> run(std::ostream* trace) {
        std::vector<GrammarCandidate> pool;
        for (std::size_t pass = 0; pass < std::max<std::size_t>(1, params_.passes); ++pass) {
            for (std::size_t i = 0; i < corpus_.size(); ++i) {
                if (corpus_[i].empty()) continue;
                std::vector<GrammarCandidate> next = pool;
                if (pool.empty()) next.push_back(candidate({raw_copy(i)}));
                for (const auto& c : pool) spawn(c, i, next);
                pool = weed(std::move(next));
                if (trace) log(*trace, pass, i, pool);
            }
            std::vector<GrammarCandidate> next = pool;
            for (const auto& c : pool) next.push_back(reestimate(c));
            pool = weed(std::move(next));
            if (trace) log(*trace, pass, corpus_.size(), pool);
        }
        return pool;
    }

private:
    const Pattern& raw_copy(std::size_t i) {
        auto& slot = raw_copies_[i];
        if (!slot) slot = make_unit_pattern(minter_, corpus_[i]);
        return *slot;
    }

    GrammarCandidate candidate(std::vector<Pattern> patterns) {
        GrammarCandidate c;
        c.patterns = std::move(patterns);
        const std::string key = c.key();
        if (auto it = scored_.find(key); it != scored_.end()) return it->second;
        const PatternStore store = c.store();
        c.G = grammar_size(store);
        c.E = 0.0;
        for (std::size_t i = 0; i < corpus_.size(); ++i) {
            const auto& enc = encoding(key, store, i);
            c.E += enc.encoding_bits + enc.unmatched_bits;
        }
        c.T = c.G + c.E;
        scored_.emplace(key, c);
        return c;
    }

    const SequenceEncoding& encoding(const std::string& key, const PatternStore& store, std::size_t i) {
        const std::string k = key + '\x1f' + std::to_string(i);
        auto it = encodings_.find(k);
        if (it == encodings_.end())
            it = encodings_.emplace(k, encode_sequence(store, corpus_[i], raw_, params_.engine)).first;
        return it->second;
    }

    static bool has_contents(const std::vector<Pattern>& ps, const std::vector<Symbol>& contents) {
        return std::any_of(ps.begin(), ps.end(), [&](const Pattern& q) { return contents_of(q) == contents; });
    }

    static bool has_id(const std::vector<Pattern>& ps, const std::string& id) {
        return std::any_of(ps.begin(), ps.end(), [&](const Pattern& q) { return q.id == id; });
    }

    void spawn(const GrammarCandidate& c, std::size_t i, std::vector<GrammarCandidate>& out) {
        auto with_raw = c.patterns;
        if (!has_contents(with_raw, corpus_[i])) {
            with_raw.push_back(raw_copy(i));
            out.push_back(candidate(with_raw));
        }
        const auto& enc = encoding(c.key(), c.store(), i);
        if (enc.structural.row_count() < 2) return;
        Derivation d = derive_patterns(enc.structural, minter_);
        if (d.degenerate) return;

        std::vector<Pattern> fresh;
        bool novel = false;
        for (auto& p : d.patterns) {
            const auto contents = contents_of(p);
            if (!contents.empty() && !has_contents(c.patterns, contents)) novel = true;
            fresh.push_back(std::move(p));
        }
        if (!novel) return;

        auto added = c.patterns;
        added.insert(added.end(), fresh.begin(), fresh.end());
        out.push_back(candidate(added));

        std::vector<Pattern> replaced;
        for (const auto& p : c.patterns)
            if (std::find(d.superseded.begin(), d.superseded.end(), p.id) == d.superseded.end())
                replaced.push_back(p);
        if (replaced.size() != c.patterns.size()) {
            replaced.insert(replaced.end(), fresh.begin(), fresh.end());
            out.push_back(candidate(replaced));
        }
    }

    // Frequency of each pattern := number of sequences whose best alignment fully matches it.
    GrammarCandidate reestimate(const GrammarCandidate& c) {
        const std::string key = c.key();
        const PatternStore store = c.store();
        std::map<std::string, std::uint64_t> counts;
        for (std::size_t i = 0; i < corpus_.size(); ++i) {
            const auto& a = encoding(key, store, i).best;
            std::vector<std::string> seen;
            for (std::size_t r = 1; r < a.row_count(); ++r) {
                const auto& id = a.rows()[r].pattern_id();
                if (!fully_matched(a, r) || std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
                seen.push_back(id);
                ++counts[id];
            }
        }
        auto ps = c.patterns;
        for (auto& p : ps) p.frequency = std::max<std::uint64_t>(1, counts[p.id]);
        return candidate(std::move(ps));
    }

    std::vector<GrammarCandidate> weed(std::vector<GrammarCandidate> cs) const {
        std::sort(cs.begin(), cs.end(), candidate_before);
        std::vector<GrammarCandidate> out;
        std::unordered_set<std::string> keys;
        for (auto& c : cs) {
            if (out.size() == std::max<std::size_t>(1, params_.pool_size)) break;
            if (!keys.insert(c.key()).second) continue;
            out.push_back(std::move(c));
        }
        return out;
    }

    static void log(std::ostream& os, std::size_t pass, std::size_t seq, const std::vector<GrammarCandidate>& pool) {
        os << "pass " << pass + 1 << " seq " << seq + 1 << " pool";
        for (const auto& c : pool) os << ' ' << c.T;
        os << '\n';
    }

    std::span<const Sequence> corpus_;
    LearnParams params_;
    IdMinter minter_;
    RawCosts raw_;
    std::map<std::size_t, std::optional<Pattern>> raw_copies_;
    std::unordered_map<std::string, GrammarCandidate> scored_;
    std::unordered_map<std::string, SequenceEncoding> encodings_;
};

}  // namespace

std::vector<GrammarCandidate> learn(std::span<const Sequence> corpus, const LearnParams& params, std::ostream* trace) {
    if (corpus.empty()) throw std::invalid_argument("learn needs a non-empty corpus");
    if (std::all_of(corpus.begin(), corpus.end(), [](const Sequence& s) { return s.empty(); }))
        throw std::invalid_argument("learn needs a non-empty corpus");
    return Learner(corpus, params).run(trace);
}

std::vector<Pattern> flatten_single_member_classes(std::span<const Pattern> patterns) {
    // Unit patterns: "L n contents #L".
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const auto& p = patterns[i];
        if (p.size() >= 3 && p.is_id(0) && p.is_id(p.size() - 1) &&
            p.symbols.back().str() == "#" + p.symbols.front().str())
            members[p.symbols.front().str()].push_back(i);
    }
    std::vector<bool> referenced(patterns.size(), false);
    std::function<std::vector<std::pair<Symbol, bool>>(const Pattern&, std::size_t)> expand =
        [&](const Pattern& p, std::size_t depth) {
            std::vector<std::pair<Symbol, bool>> out;
            for (std::size_t k = 0; k < p.size(); ++k) {
                const bool boundary = k == 0 || k + 1 == p.size();
                if (!boundary && p.is_id(k) && k + 1 < p.size() - 1 && p.is_id(k + 1) &&
                    p.symbols[k + 1].str() == "#" + p.symbols[k].str() && depth < patterns.size()) {
                    auto it = members.find(p.symbols[k].str());
                    if (it != members.end() && it->second.size() == 1) {
                        const std::size_t m = it->second.front();
                        referenced[m] = true;
                        auto inner = expand(patterns[m], depth + 1);
                        // drop the member's own class token, number and terminator
                        out.insert(out.end(), inner.begin() + 2, inner.end() - 1);
                        ++k;
                        continue;
                    }
                }
                out.push_back({p.symbols[k], p.is_id(k)});
            }
            return out;
        };
    std::vector<Pattern> expanded;
    for (const auto& p : patterns) expanded.push_back(assemble(p.id, expand(p, 0)));
    std::vector<Pattern> out;
    for (std::size_t i = 0; i < patterns.size(); ++i)
        if (!referenced[i]) {
            expanded[i].frequency = patterns[i].frequency;
            expanded[i].origin = patterns[i].origin;
            out.push_back(std::move(expanded[i]));
        }
    return out;
}

}  // namespace spma
