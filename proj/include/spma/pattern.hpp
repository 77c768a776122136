#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spma {

// An atomic token. Symbols match all-or-nothing: equality is the only relation.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string token);

    const std::string& str() const noexcept { return token_; }

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;

private:
    std::string token_;
};

// Marker that flags a token as an ID-symbol in store files.
inline constexpr char kIdMarker = '%';

std::vector<Symbol> to_symbols(std::string_view text);
std::string join(std::span<const Symbol> symbols, std::string_view sep = " ");

}  // namespace spma

template <>
struct std::hash<spma::Symbol> {
    std::size_t operator()(const spma::Symbol& s) const noexcept {
        return std::hash<std::string>{}(s.str());
    }
};

namespace spma {

enum class Origin { given, learned };

struct Pattern {
    std::string id;
    std::vector<Symbol> symbols;
    std::vector<bool> id_flags;  // true = ID-symbol
    std::uint64_t frequency = 1;
    Origin origin = Origin::given;

    std::size_t size() const noexcept { return symbols.size(); }
    bool is_id(std::size_t pos) const { return id_flags.at(pos); }

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

// Parses a pattern body where '%'-prefixed tokens are ID-symbols.
// Throws std::invalid_argument on an empty body or a bare '%'.
Pattern make_pattern(std::string id, std::string_view body, std::uint64_t frequency = 1,
                     Origin origin = Origin::given);

// Body text in store-file form ("%X %1 a b c %#X").
std::string pattern_body(const Pattern& p);

using SymbolTable = std::unordered_map<Symbol, std::uint64_t>;

// Repertoire of Old patterns. Immutable once built; the symbol table holds,
// per token, occurrences weighted by pattern frequency.
class PatternStore {
public:
    PatternStore() = default;
    // Throws DuplicateIdError on repeated ids.
    explicit PatternStore(std::vector<Pattern> patterns);

    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }
    std::size_t size() const noexcept { return patterns_.size(); }
    bool empty() const noexcept { return patterns_.empty(); }

    const Pattern* find(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;  // throws std::out_of_range

    const SymbolTable& symbol_table() const noexcept { return table_; }
    std::uint64_t total_count() const noexcept { return total_; }
    std::uint64_t count(const Symbol& token) const;

    friend bool operator==(const PatternStore& a, const PatternStore& b) {
        return a.patterns_ == b.patterns_ && a.table_ == b.table_;
    }

private:
    std::vector<Pattern> patterns_;
    std::unordered_map<std::string, std::size_t> index_;
    SymbolTable table_;
    std::uint64_t total_ = 0;
};

SymbolTable build_symbol_table(std::span<const Pattern> patterns);

// Store file: "<id> [<frequency>] : <token> ...", '#' lines are comments.
PatternStore load_store(std::string_view text);
std::string serialize_store(const PatternStore& store);

// New file: one whitespace-separated pattern per line.
std::vector<std::vector<Symbol>> load_new(std::string_view text);

// -log2(count/total); tokens absent from the table cost -log2(1/(total+1)).
double symbol_cost(const PatternStore& store, const Symbol& token);
double pattern_cost(const PatternStore& store, const Pattern& p);

}  // namespace spma
