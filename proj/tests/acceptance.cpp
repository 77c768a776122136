// One line per acceptance criterion. With an argument N only criterion N runs.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "random_cases.hpp"
#include "spma/cli.hpp"
#include "spma/corpora.hpp"
#include "spma/engine.hpp"
#include "spma/learner.hpp"
#include "spma/matcher.hpp"

using namespace spma;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::vector<Symbol> concatenated(const std::string& text) {
    std::vector<Symbol> out;
    for (const auto& line : load_new(text)) out.insert(out.end(), line.begin(), line.end());
    return out;
}

Alignment top_alignment(const char* name) {
    auto c = bundled_corpus(name);
    return build_alignments(load_store(c.store_text), concatenated(c.new_text)).at(0);
}

std::multiset<std::string> row_multiset(const Alignment& a) {
    auto ids = a.pattern_ids();
    return {ids.begin(), ids.end()};
}

bool has_inferred(const Alignment& a, const std::string& token) {
    for (const auto& i : infer_unseen(a))
        if (i.token.str() == token) return true;
    return false;
}

Outcome c1() {
    auto a = top_alignment("kittens");
    const bool rows = row_multiset(a) == oracle::kittens_parse_rows();
    const bool cols = oracle::matched_structure(a) == oracle::kittens_parse();
    std::ostringstream d;
    d << "rows " << (rows ? "equal" : "differ") << ", matched columns " << (cols ? "equal" : "differ") << " ("
      << oracle::matched_structure(a).size() << " vs " << oracle::kittens_parse().size() << ")";
    return {rows && cols, d.str()};
}

Outcome c2() {
    auto a = top_alignment("noisy");
    const bool rows = row_multiset(a) == oracle::kittens_parse_rows();
    const bool w = has_inferred(a, "w"), n = has_inferred(a, "n");
    return {rows && w && n, std::string("same 8 patterns: ") + (rows ? "yes" : "no") + ", infers w: " +
                                (w ? "yes" : "no") + ", infers n: " + (n ? "yes" : "no")};
}

Outcome c3() {
    auto a = top_alignment("runlength");
    const auto apps = a.appearances("X1");
    const auto code = join(derive_encoding(a).code);
    return {apps == 4 && a.row_count() == 5 && code == "X 1 #X",
            std::to_string(apps) + " appearances, code \"" + code + "\""};
}

Outcome c4() {
    auto c = bundled_corpus("stereo");
    auto store = load_store(c.store_text);
    auto fresh = concatenated(c.new_text);
    const auto& old = store.patterns().at(0).symbols;
    auto r = find_matches(store, fresh, old);
    std::vector<Hit> expected;
    for (std::size_t i = 0; i < 9; ++i) expected.push_back({i, i + 2});
    for (std::size_t i = 9; i < 19; ++i) expected.push_back({i, i + 4});
    for (std::size_t i = 21; i < 30; ++i) expected.push_back({i, i + 2});
    const bool hits = !r.empty() && r[0].hits == expected;
    const bool skips = fresh[19].str() == "8" && fresh[20].str() == "0" && old[11].str() == "9" && old[12].str() == "4";
    return {hits && skips, std::string("blocks 9/10/9 ") + (hits ? "matched" : "not matched") + ", skipped 8 0 and 9 4: " +
                               (skips ? "yes" : "no")};
}

// Patterns equal up to a bijective renaming of ID tokens.
bool isomorphic(std::vector<Pattern> a, std::vector<Pattern> b) {
    if (a.size() != b.size()) return false;
    std::sort(b.begin(), b.end(), [](const Pattern& x, const Pattern& y) { return x.id < y.id; });
    std::vector<std::size_t> perm(b.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
        std::map<std::string, std::string> fwd, back;
        bool ok = true;
        for (std::size_t i = 0; ok && i < a.size(); ++i) {
            const Pattern& p = a[i];
            const Pattern& q = b[perm[i]];
            if (p.size() != q.size() || p.id_flags != q.id_flags) {
                ok = false;
                break;
            }
            for (std::size_t k = 0; ok && k < p.size(); ++k) {
                const auto& s = p.symbols[k].str();
                const auto& t = q.symbols[k].str();
                if (!p.is_id(k)) {
                    ok = s == t;
                    continue;
                }
                auto [f, fi] = fwd.emplace(s, t);
                auto [g, gi] = back.emplace(t, s);
                ok = f->second == t && g->second == s;
            }
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

std::vector<Pattern> shared_frame_grammar() {
    return load_store("B2 : %B %2 t h a t %#B\nC3 : %C %3 b o y %#C\nC4 : %C %4 g i r l %#C\n"
                      "D5 : %D %5 r u n s %#D\nE6 : %E %6 %B %#B %C %#C %D %#D %#E\n")
        .patterns();
}

Outcome c5() {
    auto corpus = load_new(bundled_corpus("learning").new_text);
    LearnParams lp;
    auto ranked = learn(corpus, lp);
    const auto target = shared_frame_grammar();
    PatternStore target_store(target);
    const double t_target = grammar_size(target_store) + corpus_encoding_size(target_store, corpus, lp.engine);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < ranked.size() && !rank; ++i)
        if (isomorphic(ranked[i].patterns, target)) rank = i + 1;
    const bool pass = rank == 1;
    std::ostringstream d;
    d.precision(2);
    d << std::fixed << "best T " << ranked[0].T << " with " << ranked[0].patterns.size()
      << " pattern(s); the five-pattern grammar scores T " << t_target;
    if (rank)
        d << " and ranks " << rank << " in the pool";
    else
        d << " and is not in the final pool";
    return {pass, d.str()};
}

Outcome c6() {
    auto chain = route_chain(top_alignment("route"));
    const std::vector<std::string> expected{"Beijing", "Melbourne", "Cape_Town", "Paris", "New_York"};
    std::string got;
    for (const auto& c : chain) got += (got.empty() ? "" : " -> ") + c;
    return {chain == expected, "route " + (got.empty() ? std::string("(none)") : got)};
}

Outcome c7() {
    auto a = top_alignment("plant");
    bool triple = true;
    for (const char* t : {"photosynthesises", "five", "poisonous"}) triple = triple && has_inferred(a, t);
    std::set<std::string> taxa;
    for (const auto& id : a.pattern_ids()) taxa.insert(id.substr(0, id.find('_')));
    bool chain = true;
    for (const char* t : {"species", "genus", "family", "order", "class", "phylum"}) chain = chain && taxa.count(t);
    return {triple && chain, std::string("inferred triple: ") + (triple ? "yes" : "no") +
                                 ", species-to-phylum rows: " + (chain ? "yes" : "no")};
}

Outcome c8() {
    std::mt19937 rng(8);
    int align_bad = 0, match_bad = 0;
    // Within the oracle bounds the search budget is widened; the defaults trade
    // exactness on these instances for speed on the larger corpora.
    EngineParams ep;
    ep.max_stages = 2;
    ep.beam_width = 100;
    ep.alternatives = 40;
    ep.per_multiset = 40;
    for (int k = 0; k < 200; ++k) {
        auto store = gen::store(rng);
        auto fresh = gen::sequence(rng);
        const double engine = build_alignments(store, fresh, ep).at(0).compression_difference;
        const double best = oracle::best_cd_by_enumeration(store, fresh, 2);
        if (std::abs(engine - best) > 1e-9) ++align_bad;

        auto d = gen::sequence(rng, 1, 7, 5), t = gen::sequence(rng, 1, 7, 5);
        auto counts = oracle::count_store_text(serialize_store(store));
        const double brute = oracle::brute_best_match(gen::strings(d), gen::strings(t),
                                                      [&](const std::string& s) { return counts.cost(s); }, 0.0);
        auto r = find_matches(store, d, t);
        if (std::isnan(brute) ? !r.empty() : (r.empty() || std::abs(r[0].score - brute) > 1e-9)) ++match_bad;
    }
    return {align_bad == 0 && match_bad == 0, "200 instances: alignment mismatches " + std::to_string(align_bad) +
                                                  ", match mismatches " + std::to_string(match_bad) +
                                                  " (up to 2 Old rows, beam 100)"};
}

Outcome c9() {
    int failed = 0;
    std::string names;
    for (const char* bin : {SPMA_PROPERTY_PATTERN, SPMA_PROPERTY_MATCHER, SPMA_PROPERTY_ALIGNMENT,
                            SPMA_PROPERTY_LEARNER, SPMA_PROPERTY_RENDER}) {
        const std::string cmd = std::string("\"") + bin + "\" > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) {
            ++failed;
            names += std::string(" ") + bin;
        }
    }
    return {failed == 0, failed ? "failing suites:" + names : std::string("5 suites, 1000 cases per property")};
}

Outcome c10() {
    auto corpus = load_new(bundled_corpus("errors").new_text);
    LearnParams lp;
    auto ranked = learn(corpus, lp);
    bool excluded = true;
    for (const auto& p : ranked.at(0).patterns)
        for (const auto& s : p.symbols) excluded = excluded && s.str() != "z";
    // the same grammar with the corrupted line stored verbatim
    auto with_error = ranked[0].patterns;
    IdMinter m(corpus);
    for (const auto& p : with_error)
        for (const auto& s : p.symbols) m.reserve(s.str());
    for (const auto& s : corpus)
        if (s.back().str() == "z") with_error.push_back(make_unit_pattern(m, s));
    PatternStore ws(with_error);
    const double t_error = grammar_size(ws) + corpus_encoding_size(ws, corpus, lp.engine);
    std::ostringstream d;
    d.precision(2);
    d << std::fixed << "best grammar " << (excluded ? "excludes" : "contains") << " z (T " << ranked[0].T
      << "; storing the corrupted line too gives T " << t_error << ")";
    return {excluded && ranked[0].T < t_error, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    Outcome (*criteria[])() = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
    int first = 1, last = 10;
    if (argc > 1) {
        first = last = std::atoi(argv[1]);
        if (first < 1 || first > 10) {
            std::cerr << "usage: acceptance [1-10]\n";
            return 2;
        }
    }
    bool all = true;
    for (int n = first; n <= last; ++n) {
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
