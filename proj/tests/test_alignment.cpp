#include <doctest.h>

#include <cmath>
#include <tuple>

#include "oracles.hpp"
#include "spma/alignment.hpp"
#include "spma/corpora.hpp"
#include "spma/engine.hpp"
#include "spma/errors.hpp"

using namespace spma;

namespace {

// Joins pattern positions to the columns holding (row, row position) entries.
Alignment link(const Alignment& a, const Pattern& p,
               std::initializer_list<std::tuple<std::size_t, std::size_t, std::size_t>> links) {
    MatchResult m;
    for (auto [pos, row, row_pos] : links) m.hits.push_back({a.rows()[row].columns[row_pos], pos});
    std::sort(m.hits.begin(), m.hits.end());
    return merge(a, p, m);
}

MatchResult run(std::size_t col, std::size_t pos, std::size_t n) {
    MatchResult m;
    for (std::size_t k = 0; k < n; ++k) m.hits.push_back({col + k, pos + k});
    return m;
}

}  // namespace

TEST_CASE("a single-row alignment") {
    Alignment a(to_symbols("t h a t"));
    CHECK(a.row_count() == 1);
    CHECK(a.column_count() == 4);
    CHECK(derive_encoding(a).code.empty());
    CHECK(infer_unseen(a).empty());
    CHECK(alignment_violations(a).empty());
}

TEST_CASE("merging a full match of the contents") {
    Alignment a(to_symbols("t h a t"));
    auto p = make_pattern("B2", "%B %2 t h a t %#B");
    Alignment b = merge(a, p, run(0, 2, 4));
    CHECK(b.column_count() == 7);
    CHECK(b.row_count() == 2);
    std::vector<std::string> unmatched;
    for (std::size_t c = 0; c < b.column_count(); ++c)
        if (!b.columns()[c].matched()) unmatched.push_back(b.token(c).str());
    CHECK(unmatched == std::vector<std::string>{"B", "2", "#B"});
    CHECK(join(derive_encoding(b).code) == "B 2 #B");
    CHECK(alignment_violations(b).empty());
    CHECK(b.rows()[1].appearance == 1);
    CHECK(infer_unseen(b).empty());
}

TEST_CASE("merge rejects crossings and bad hits") {
    Alignment a(to_symbols("a b"));
    auto p = make_pattern("P", "a b");
    MatchResult crossing;
    crossing.hits = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(merge(a, p, crossing), MergeRejected);
    MatchResult unequal;
    unequal.hits = {{0, 1}};
    CHECK_THROWS_AS(merge(a, p, unequal), MergeRejected);
    MatchResult out_of_range;
    out_of_range.hits = {{5, 0}};
    CHECK_THROWS_AS(merge(a, p, out_of_range), MergeRejected);
    CHECK_THROWS_AS(merge(a, p, MatchResult{}), MergeRejected);
}

TEST_CASE("hit rules between Old rows") {
    auto e = make_pattern("E", "%E %1 a %#E");
    Alignment a = merge(Alignment(to_symbols("a")), e, run(0, 2, 1));
    const std::size_t head = a.rows()[1].columns[0], tail = a.rows()[1].columns[3];
    CHECK_FALSE(hit_allowed(a, head, e, 0));  // same pattern, same position
    auto f = make_pattern("F", "%E %#E");
    CHECK_FALSE(hit_allowed(a, head, f, 0));  // two heads
    CHECK_FALSE(hit_allowed(a, tail, f, 1));  // two tails
    auto g = make_pattern("G", "%H %E %#E %#H");
    CHECK(hit_allowed(a, head, g, 1));
    CHECK(hit_allowed(a, tail, g, 2));
    CHECK_FALSE(hit_allowed(a, head, g, 0));  // unequal tokens
}

TEST_CASE("face schematic: the head pattern links the parts") {
    auto c = bundled_corpus("face");
    auto store = load_store(c.store_text);
    auto fresh = load_new(c.new_text).at(0);
    auto P = [&](const char* id) { return *store.find(id); };
    Alignment a(fresh);
    a = link(a, P("E1"), {{2, 0, 0}, {3, 0, 1}, {4, 0, 2}});     // row 1: first ear
    a = link(a, P("Y2"), {{2, 0, 3}, {3, 0, 4}, {4, 0, 5}});     // row 2: first eye
    a = link(a, P("N3"), {{2, 0, 6}, {3, 0, 7}, {4, 0, 8}, {5, 0, 9}});
    a = link(a, P("Y2"), {{2, 0, 10}, {3, 0, 11}, {4, 0, 12}});  // row 4
    a = link(a, P("E1"), {{2, 0, 13}, {3, 0, 14}, {4, 0, 15}});  // row 5
    a = link(a, P("H4"), {{2, 1, 0},
                          {3, 1, 5},
                          {4, 2, 0},
                          {5, 2, 5},
                          {6, 3, 0},
                          {7, 3, 6},
                          {8, 4, 0},
                          {9, 4, 5},
                          {10, 5, 0},
                          {11, 5, 5}});
    CHECK(alignment_violations(a).empty());
    CHECK(a.rows()[5].appearance == 2);
    const Row& h = a.rows()[6];
    for (std::size_t p = 2; p < 12; ++p) CHECK(a.columns()[h.columns[p]].matched());
    CHECK(join(derive_encoding(a).code) == "H 4 1 2 3 2 1 #H");
    compression_difference(store, a);
    CHECK(a.compression_difference > 0);
}

TEST_CASE("compression difference by hand") {
    const std::string text = "X 3 : %X %1 a b c %#X\nY 2 : %Y a %#Y\n";
    auto store = load_store(text);
    auto counts = oracle::count_store_text(text);
    Alignment a = merge(Alignment(to_symbols("a b c")), store.patterns()[0], run(0, 2, 3));
    const double cd = compression_difference(store, a);
    const double matched = counts.cost("a") + counts.cost("b") + counts.cost("c");
    const double code = counts.cost("X") + counts.cost("1") + counts.cost("#X");
    CHECK(a.matched_new_bits == doctest::Approx(matched).epsilon(1e-12));
    CHECK(a.encoding_bits == doctest::Approx(code).epsilon(1e-12));
    CHECK(cd == doctest::Approx(matched - code).epsilon(1e-12));
    CHECK(a.compression_difference == cd);

    Alignment root(to_symbols("a b c"));
    CHECK(compression_difference(store, root) == 0.0);
}

TEST_CASE("run-length coding beats a single appearance") {
    auto c = bundled_corpus("runlength");
    auto store = load_store(c.store_text);
    auto fresh = load_new(c.new_text).at(0);
    Alignment one = merge(Alignment(fresh), store.patterns()[0], run(0, 2, 3));
    compression_difference(store, one);
    auto best = build_alignments(store, fresh).at(0);
    CHECK(best.row_count() == 5);
    CHECK(join(derive_encoding(best).code) == "X 1 #X");
    CHECK(best.compression_difference > one.compression_difference);
}

TEST_CASE("relative probabilities") {
    std::vector<double> one{3.0};
    CHECK(relative_probabilities(one) == std::vector<double>{1.0});
    std::vector<double> tie{2.0, 2.0};
    auto p = relative_probabilities(tie);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    std::vector<double> step{5.0, 4.0};
    p = relative_probabilities(step);
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0));
    std::vector<double> huge{2000.0, 0.0};
    p = relative_probabilities(huge);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(p[1]));
}

TEST_CASE("inferred symbols are contents of Old rows in unmatched columns") {
    auto p = make_pattern("D1", "%D %4 t w o %#D");
    MatchResult m;
    m.hits = {{0, 2}, {1, 4}};
    Alignment a = merge(Alignment(to_symbols("t o")), p, m);
    auto inf = infer_unseen(a);
    REQUIRE(inf.size() == 1);
    CHECK(inf[0] == Inferred{Symbol("w"), "D1"});
}

TEST_CASE("the validity checker reports broken structures") {
    Alignment a(to_symbols("a b"));
    auto p = std::make_shared<const Pattern>(make_pattern("P", "a b"));
    Row r;
    r.pattern = p;
    r.appearance = 1;
    std::vector<Row> rows = a.rows();
    rows.push_back(r);
    // row 1 placed against the column order
    std::vector<Column> crossed{{{{0, 0}, {1, 1}}}, {{{0, 1}, {1, 0}}}};
    CHECK_FALSE(alignment_violations(from_parts(rows, crossed)).empty());
    // unequal tokens and a missing New symbol
    std::vector<Column> mixed{{{{0, 0}, {1, 1}}}, {{{1, 0}}}};
    CHECK(alignment_violations(from_parts(rows, mixed)).size() >= 2);
    std::vector<Column> good{{{{0, 0}, {1, 0}}}, {{{0, 1}, {1, 1}}}};
    CHECK(alignment_violations(from_parts(rows, good)).empty());
}

TEST_CASE("recursive appearances contribute their code once") {
    auto c = bundled_corpus("runlength");
    auto store = load_store(c.store_text);
    auto best = build_alignments(store, load_new(c.new_text).at(0)).at(0);
    CHECK(best.appearances("X1") == 4);
    CHECK(encoding_entries(best).size() == 3);
}

TEST_CASE("ranking prefers higher CD, then fewer rows") {
    Alignment a(to_symbols("a")), b(to_symbols("a"));
    a.compression_difference = 2.0;
    b.compression_difference = 1.0;
    CHECK(alignment_ranks_before(a, b));
    CHECK_FALSE(alignment_ranks_before(b, a));
    auto p = make_pattern("P", "%X a %#X");
    Alignment c = merge(b, p, run(0, 1, 1));
    c.compression_difference = 1.0;
    CHECK(alignment_ranks_before(b, c));
}
