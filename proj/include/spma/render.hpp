#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spma/alignment.hpp"
#include "spma/matcher.hpp"

namespace spma {

// Column layout: one line per row, prefixed by the row index, with a
// connector line of '|' between consecutive rows. A column spanning a row it has
// no entry in shows '|' on that row's line.
std::vector<std::string> render_alignment(const Alignment& alignment);
std::string render_text(const Alignment& alignment);

// Column structure recovered from a rendering: per column, the (row, position) entries.
using ColumnStructure = std::vector<std::vector<Entry>>;
ColumnStructure parse_rendering(std::span<const std::string> lines);
ColumnStructure column_structure(const Alignment& alignment);

nlohmann::json alignment_json(const Alignment& alignment);
nlohmann::json match_json(const MatchResult& match, std::span<const Symbol> driving);
ColumnStructure column_structure(const nlohmann::json& alignment_json);

}  // namespace spma
