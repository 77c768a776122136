#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "random_cases.hpp"
#include "spma/engine.hpp"

using namespace spma;

namespace {

EngineParams small_params(std::mt19937& rng) {
    std::uniform_int_distribution<int> beam(1, 12), stages(1, 4), top(1, 6);
    EngineParams p;
    p.beam_width = beam(rng);
    p.max_stages = stages(rng);
    p.top_k = top(rng);
    p.max_appearances = 3;
    return p;
}

}  // namespace

TEST_CASE("engine output is valid, ranked and scored consistently") {
    std::mt19937 rng(31);
    for (int k = 0; k < gen::kCases; ++k) {
        auto store = gen::store(rng);
        auto fresh = gen::sequence(rng);
        auto params = small_params(rng);
        auto as = build_alignments(store, fresh, params);
        REQUIRE_FALSE(as.empty());
        REQUIRE(as.size() <= params.top_k);
        REQUIRE(as[0].compression_difference >= 0.0);
        for (std::size_t i = 0; i < as.size(); ++i) {
            const auto& a = as[i];
            auto problems = alignment_violations(a);
            CAPTURE(problems.size() ? problems[0] : std::string());
            REQUIRE(problems.empty());
            REQUIRE(a.new_symbols() == fresh);
            Alignment copy = a;
            REQUIRE(compression_difference(store, copy) == doctest::Approx(a.compression_difference));
            if (i > 0) REQUIRE(as[i - 1].compression_difference >= as[i].compression_difference - 1e-9);

            std::size_t last = 0;
            auto entries = encoding_entries(a);
            auto code = derive_encoding(a).code;
            REQUIRE(entries.size() == code.size());
            for (std::size_t j = 0; j < entries.size(); ++j) {
                REQUIRE(entries[j].row >= 1);
                REQUIRE(a.is_id(entries[j]));
                REQUIRE(a.token(entries[j]) == code[j]);
                const std::size_t col = a.rows()[entries[j].row].columns[entries[j].position];
                REQUIRE_FALSE(a.columns()[col].matched());
                if (j > 0) REQUIRE(col > last);
                last = col;
            }
            for (const auto& inf : infer_unseen(a)) REQUIRE(store.find(inf.pattern_id) != nullptr);
        }
    }
}

TEST_CASE("relative probabilities sum to one and follow the CD order") {
    std::mt19937 rng(32);
    std::uniform_real_distribution<double> cd(-50.0, 200.0);
    std::uniform_int_distribution<int> n(1, 12);
    for (int k = 0; k < gen::kCases; ++k) {
        std::vector<double> cds(n(rng));
        for (auto& x : cds) x = cd(rng);
        std::sort(cds.rbegin(), cds.rend());
        auto p = relative_probabilities(cds);
        REQUIRE(p.size() == cds.size());
        double sum = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            REQUIRE(p[i] >= 0.0);
            REQUIRE(p[i] <= 1.0);
            if (i > 0) REQUIRE(p[i - 1] >= p[i] - 1e-12);
            sum += p[i];
        }
        REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("probabilities of engine output") {
    std::mt19937 rng(33);
    for (int k = 0; k < gen::kCases; ++k) {
        auto store = gen::store(rng);
        auto as = build_alignments(store, gen::sequence(rng), small_params(rng));
        auto p = relative_probabilities(as);
        double sum = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i > 0) REQUIRE(p[i - 1] >= p[i] - 1e-12);
            sum += p[i];
        }
        REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("engine is deterministic") {
    std::mt19937 rng(34);
    for (int k = 0; k < gen::kCases; ++k) {
        auto store = gen::store(rng);
        auto fresh = gen::sequence(rng);
        auto params = small_params(rng);
        auto a = build_alignments(store, fresh, params);
        auto b = build_alignments(store, fresh, params);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            REQUIRE(a[i].signature() == b[i].signature());
            REQUIRE(a[i].compression_difference == b[i].compression_difference);
        }
    }
}
