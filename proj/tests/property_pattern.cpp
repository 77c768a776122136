#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "random_cases.hpp"
#include "spma/pattern.hpp"

using namespace spma;

TEST_CASE("symbol table is order independent and matches a text count") {
    std::mt19937 rng(11);
    for (int k = 0; k < gen::kCases; ++k) {
        auto store = gen::store(rng);
        auto ps = store.patterns();
        std::shuffle(ps.begin(), ps.end(), rng);
        PatternStore shuffled(ps);
        REQUIRE(shuffled.symbol_table() == store.symbol_table());
        REQUIRE(build_symbol_table(store.patterns()) == store.symbol_table());

        auto counts = oracle::count_store_text(serialize_store(store));
        REQUIRE(counts.total == store.total_count());
        for (const auto& [tok, n] : store.symbol_table()) REQUIRE(counts.count.at(tok.str()) == n);
    }
}

TEST_CASE("in-table costs are non-negative and their code lengths sum to one") {
    std::mt19937 rng(12);
    for (int k = 0; k < gen::kCases; ++k) {
        auto store = gen::store(rng);
        double kraft = 0;
        for (const auto& [tok, n] : store.symbol_table()) {
            const double c = symbol_cost(store, tok);
            REQUIRE(c >= 0.0);
            kraft += std::exp2(-c);
        }
        REQUIRE(kraft == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(symbol_cost(store, Symbol("zz")) == doctest::Approx(std::log2(store.total_count() + 1.0)));
    }
}

TEST_CASE("store round trip") {
    std::mt19937 rng(13);
    for (int k = 0; k < gen::kCases; ++k) {
        auto store = gen::store(rng);
        const auto text = serialize_store(store);
        auto again = load_store(text);
        REQUIRE(again == store);
        REQUIRE(serialize_store(again) == text);
        for (const auto& p : again.patterns()) {
            REQUIRE(p.id_flags.size() == p.symbols.size());
            for (const auto& s : p.symbols) REQUIRE(s.str().front() != kIdMarker);
        }
    }
}
