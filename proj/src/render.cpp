#include "spma/render.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace spma {

namespace {

struct Span {
    std::size_t lo, hi;  // rows holding the column's first and last entries
};

std::string rtrim(std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

std::vector<std::string> render_alignment(const Alignment& a) {
    const auto& cols = a.columns();
    const std::size_t nrows = a.row_count();
    const std::size_t label = std::to_string(nrows ? nrows - 1 : 0).size() + 1;

    std::vector<std::size_t> width(cols.size());
    std::vector<Span> span(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        width[c] = a.token(c).str().size();
        span[c] = {cols[c].entries.front().row, cols[c].entries.front().row};
        for (const auto& e : cols[c].entries) {
            span[c].lo = std::min(span[c].lo, e.row);
            span[c].hi = std::max(span[c].hi, e.row);
        }
    }
    auto cell = [](std::string& line, const std::string& text, std::size_t w) {
        line += text;
        line.append(w - std::min(w, text.size()) + 1, ' ');
    };

    std::vector<std::string> lines;
    for (std::size_t r = 0; r < nrows; ++r) {
        if (r > 0) {
            std::string conn(label, ' ');
            for (std::size_t c = 0; c < cols.size(); ++c)
                cell(conn, span[c].lo < r && span[c].hi >= r ? "|" : "", width[c]);
            lines.push_back(rtrim(std::move(conn)));
        }
        std::string line = std::to_string(r);
        line.append(label - line.size(), ' ');
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const Entry* here = nullptr;
            for (const auto& e : cols[c].entries)
                if (e.row == r) here = &e;
            if (here)
                cell(line, a.token(*here).str(), width[c]);
            else
                cell(line, span[c].lo < r && span[c].hi > r ? "|" : "", width[c]);
        }
        lines.push_back(rtrim(std::move(line)));
    }
    return lines;
}

std::string render_text(const Alignment& a) {
    std::string out;
    for (const auto& l : render_alignment(a)) out += l + '\n';
    return out;
}

ColumnStructure parse_rendering(std::span<const std::string> lines) {
    // Row lines begin with their index; connector lines begin with a space.
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> by_offset;
    for (const auto& line : lines) {
        if (line.empty() || !std::isdigit(static_cast<unsigned char>(line.front()))) continue;
        std::size_t i = 0;
        while (i < line.size() && line[i] != ' ') ++i;
        const std::size_t row = std::stoul(line.substr(0, i));
        std::size_t pos = 0;
        while (i < line.size()) {
            while (i < line.size() && line[i] == ' ') ++i;
            if (i >= line.size()) break;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ') ++j;
            if (line.compare(i, j - i, "|") != 0) by_offset[i].push_back({row, pos++});
            i = j;
        }
    }
    ColumnStructure out;
    for (auto& [_, entries] : by_offset) {
        std::vector<Entry> col;
        for (auto [r, p] : entries) col.push_back({r, p});
        std::sort(col.begin(), col.end());
        out.push_back(std::move(col));
    }
    return out;
}

ColumnStructure column_structure(const Alignment& a) {
    ColumnStructure out;
    for (const auto& c : a.columns()) {
        auto es = c.entries;
        std::sort(es.begin(), es.end());
        out.push_back(std::move(es));
    }
    return out;
}

nlohmann::json alignment_json(const Alignment& a) {
    using nlohmann::json;
    json rows = json::array();
    for (std::size_t r = 0; r < a.row_count(); ++r) {
        const Row& row = a.rows()[r];
        json syms = json::array();
        for (const auto& s : row.pattern->symbols) syms.push_back(s.str());
        rows.push_back({{"row", r},
                        {"pattern_id", row.is_new ? json(nullptr) : json(row.pattern_id())},
                        {"appearance", row.appearance},
                        {"new", row.is_new},
                        {"symbols", syms}});
    }
    json cols = json::array();
    for (const auto& c : a.columns()) {
        json col = json::array();
        for (const auto& e : c.entries)
            col.push_back({{"row", e.row}, {"position", e.position}, {"token", a.token(e).str()}});
        cols.push_back(col);
    }
    json code = json::array();
    for (const auto& s : derive_encoding(a).code) code.push_back(s.str());
    json inferred = json::array();
    for (const auto& i : infer_unseen(a))
        inferred.push_back({{"token", i.token.str()}, {"pattern_id", i.pattern_id}});
    return {{"rows", rows},
            {"columns", cols},
            {"matched_new_bits", a.matched_new_bits},
            {"encoding_bits", a.encoding_bits},
            {"compression_difference", a.compression_difference},
            {"encoding", code},
            {"inferred", inferred}};
}

nlohmann::json match_json(const MatchResult& m, std::span<const Symbol> driving) {
    using nlohmann::json;
    json hits = json::array();
    for (const auto& h : m.hits) {
        json hit = {{"driving_index", h.driving_index}, {"target_index", h.target_index}};
        if (h.driving_index < driving.size()) hit["token"] = driving[h.driving_index].str();
        hits.push_back(hit);
    }
    return {{"hits", hits}, {"score", m.score}};
}

ColumnStructure column_structure(const nlohmann::json& j) {
    ColumnStructure out;
    for (const auto& col : j.at("columns")) {
        std::vector<Entry> es;
        for (const auto& e : col)
            es.push_back({e.at("row").get<std::size_t>(), e.at("position").get<std::size_t>()});
        std::sort(es.begin(), es.end());
        out.push_back(std::move(es));
    }
    return out;
}

}  // namespace spma
