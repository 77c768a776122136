#include "spma/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spma/errors.hpp"

namespace spma {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        if (j > i) out.push_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        f(line_no, line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

}  // namespace

Symbol::Symbol(std::string token) : token_(std::move(token)) {
    if (token_.empty()) throw std::invalid_argument("empty symbol");
    if (std::any_of(token_.begin(), token_.end(), is_space))
        throw std::invalid_argument("symbol contains whitespace: '" + token_ + "'");
    if (token_.front() == kIdMarker)
        throw std::invalid_argument("symbol begins with the ID marker: '" + token_ + "'");
}

std::vector<Symbol> to_symbols(std::string_view text) {
    std::vector<Symbol> out;
    for (auto tok : split_ws(text)) out.emplace_back(std::string(tok));
    return out;
}

std::string join(std::span<const Symbol> symbols, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i) out += sep;
        out += symbols[i].str();
    }
    return out;
}

Pattern make_pattern(std::string id, std::string_view body, std::uint64_t frequency,
                     Origin origin) {
    if (frequency == 0) throw std::invalid_argument("pattern frequency must be positive");
    Pattern p;
    p.id = std::move(id);
    p.frequency = frequency;
    p.origin = origin;
    for (auto tok : split_ws(body)) {
        bool flagged = tok.front() == kIdMarker;
        if (flagged) tok.remove_prefix(1);
        if (tok.empty()) throw std::invalid_argument("bare ID marker");
        p.symbols.emplace_back(std::string(tok));
        p.id_flags.push_back(flagged);
    }
    if (p.symbols.empty()) throw std::invalid_argument("empty pattern body");
    return p;
}

std::string pattern_body(const Pattern& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ' ';
        if (p.id_flags[i]) out += kIdMarker;
        out += p.symbols[i].str();
    }
    return out;
}

SymbolTable build_symbol_table(std::span<const Pattern> patterns) {
    SymbolTable table;
    for (const auto& p : patterns)
        for (const auto& s : p.symbols) table[s] += p.frequency;
    return table;
}

PatternStore::PatternStore(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
        const auto& p = patterns_[i];
        if (p.symbols.empty() || p.id_flags.size() != p.symbols.size() || p.frequency == 0)
            throw std::invalid_argument("malformed pattern '" + p.id + "'");
        if (!index_.emplace(p.id, i).second) throw DuplicateIdError(p.id);
    }
    table_ = build_symbol_table(patterns_);
    for (const auto& [_, n] : table_) total_ += n;
}

const Pattern* PatternStore::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &patterns_[it->second];
}

std::size_t PatternStore::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw std::out_of_range("no pattern '" + std::string(id) + "'");
    return it->second;
}

std::uint64_t PatternStore::count(const Symbol& token) const {
    auto it = table_.find(token);
    return it == table_.end() ? 0 : it->second;
}

PatternStore load_store(std::string_view text) {
    std::vector<Pattern> patterns;
    std::unordered_map<std::string, std::size_t> seen;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        line = trim(line);
        if (line.empty() || line.front() == '#') return;
        auto tokens = split_ws(line);
        auto sep = std::find(tokens.begin(), tokens.end(), std::string_view(":"));
        if (sep == tokens.end()) throw ParseError(line_no, "missing ':' separator");
        std::vector<std::string_view> header(tokens.begin(), sep);
        auto body_start = sep == tokens.end() - 1 ? line.size()
                                                  : static_cast<std::size_t>((sep + 1)->data() - line.data());
        auto body = line.substr(body_start);
        if (header.empty()) throw ParseError(line_no, "missing pattern id");
        if (header.size() > 2) throw ParseError(line_no, "unexpected tokens before ':'");
        std::uint64_t freq = 1;
        if (header.size() == 2) {
            auto f = header[1];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), freq);
            if (ec != std::errc{} || ptr != f.data() + f.size() || freq == 0)
                throw ParseError(line_no, "missing or invalid frequency '" + std::string(f) + "'");
        }
        std::string id(header[0]);
        if (seen.count(id)) throw DuplicateIdError(id);
        try {
            patterns.push_back(make_pattern(id, body, freq));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        seen.emplace(std::move(id), patterns.size() - 1);
    });
    return PatternStore(std::move(patterns));
}

std::string serialize_store(const PatternStore& store) {
    std::ostringstream out;
    for (const auto& p : store.patterns())
        out << p.id << ' ' << p.frequency << " : " << pattern_body(p) << '\n';
    return out.str();
}

std::vector<std::vector<Symbol>> load_new(std::string_view text) {
    std::vector<std::vector<Symbol>> out;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        line = trim(line);
        if (line.empty()) return;
        if (line.front() == '#' && (line.size() == 1 || is_space(line[1]))) return;
        try {
            out.push_back(to_symbols(line));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    });
    return out;
}

double symbol_cost(const PatternStore& store, const Symbol& token) {
    if (store.total_count() == 0) throw UndefinedCostError();
    const auto total = static_cast<double>(store.total_count());
    const auto n = store.count(token);
    if (n == 0) return std::log2(total + 1.0);
    return -std::log2(static_cast<double>(n) / total);
}

double pattern_cost(const PatternStore& store, const Pattern& p) {
    double bits = 0.0;
    for (const auto& s : p.symbols) bits += symbol_cost(store, s);
    return bits;
}

}  // namespace spma
