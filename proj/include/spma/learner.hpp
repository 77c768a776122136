#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "spma/alignment.hpp"
#include "spma/engine.hpp"
#include "spma/pattern.hpp"

namespace spma {

using Sequence = std::vector<Symbol>;

// Hands out ID tokens that collide with neither the corpus alphabet nor anything
// minted before. Class tokens run A..Z, then A1..Z1, A2..; numeric tokens 1, 2, ..
class IdMinter {
public:
    IdMinter() = default;
    explicit IdMinter(std::span<const Sequence> corpus);

    std::string next_class();
    std::string next_number();
    void reserve(const std::string& token) { taken_.insert(token); }
    bool taken(const std::string& token) const { return taken_.count(token) > 0; }

private:
    bool usable(const std::string& token) const;

    std::unordered_set<std::string> taken_;
    std::size_t class_index_ = 0;
    std::size_t number_ = 0;
};

// "L n tokens #L" with fresh L and n.
Pattern make_unit_pattern(IdMinter& minter, std::span<const Symbol> contents, std::string_view class_token = {});

struct SegmentRun {
    static constexpr std::size_t kShared = std::numeric_limits<std::size_t>::max();

    bool matched = false;
    std::size_t row = kShared;         // the single row of an unmatched run
    std::vector<std::size_t> columns;  // consecutive among the non-skipped columns
    std::vector<Symbol> tokens;
    std::vector<std::string> pattern_ids;  // patterns minted from this run
};

struct SegmentationTrace {
    std::vector<SegmentRun> runs;
    // Columns holding only Old ID-symbols; they belong to no run.
    std::vector<std::size_t> skipped_columns;
};

struct Derivation {
    std::vector<Pattern> patterns;
    SegmentationTrace trace;
    bool degenerate = false;  // no matched columns
    // Old rows whose contents the minted patterns take over.
    std::vector<std::string> superseded;
};

// Splits the aligned material into maximal runs that are fully matched or fully
// unmatched and mints one pattern per matched run, one per side of each slot
// between matched runs, and an abstract pattern sequencing them. When no slot has
// material on both the New and the Old side the result is one unified pattern.
// Throws std::invalid_argument when the alignment has fewer than 2 rows.
Derivation derive_patterns(const Alignment& alignment, IdMinter& minter);

struct GrammarCandidate {
    std::vector<Pattern> patterns;
    double G = 0.0;
    double E = 0.0;
    double T = 0.0;

    PatternStore store() const { return PatternStore(patterns); }
    std::string key() const;
};

// Sum of pattern costs plus log2(n + 1) bits per pattern, costs taken from `costs`.
double grammar_size(const PatternStore& costs, std::span<const Pattern> patterns);
double grammar_size(const PatternStore& candidate);

// Cost of a New symbol left unmatched, from the corpus's own symbol frequencies.
class RawCosts {
public:
    explicit RawCosts(std::span<const Sequence> corpus);
    double cost(const Symbol& token) const;

private:
    PatternStore table_;
};

struct SequenceEncoding {
    double encoding_bits = 0.0;
    double unmatched_bits = 0.0;
    Alignment best;        // minimises encoding_bits + unmatched_bits
    Alignment structural;  // highest-CD alignment with at least one Old row, else row 0 only
};

SequenceEncoding encode_sequence(const PatternStore& candidate, const Sequence& sequence, const RawCosts& raw,
                                 const EngineParams& params);

double corpus_encoding_size(const PatternStore& candidate, std::span<const Sequence> corpus,
                            const EngineParams& params);

struct LearnParams {
    EngineParams engine{6, 6, 3, 6, 3, 0.1, 0.5, 2};
    std::size_t pool_size = 10;
    std::size_t passes = 2;
};

// Candidates sorted by T ascending. Throws std::invalid_argument on an empty corpus.
// When `trace` is given, one line per processed sequence lists the pool's scores.
std::vector<GrammarCandidate> learn(std::span<const Sequence> corpus, const LearnParams& params = {},
                                    std::ostream* trace = nullptr);

// Replaces every reference "L #L" to a single-member class by that member's contents,
// recursively, and drops the members. Used to compare grammars with the shape of
// a class-discovery schema.
std::vector<Pattern> flatten_single_member_classes(std::span<const Pattern> patterns);

}  // namespace spma
