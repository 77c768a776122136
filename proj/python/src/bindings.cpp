#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <json.hpp>

#include "spma/cli.hpp"
#include "spma/corpora.hpp"
#include "spma/engine.hpp"
#include "spma/errors.hpp"
#include "spma/learner.hpp"
#include "spma/render.hpp"

namespace py = pybind11;
using namespace spma;

namespace {

std::vector<Symbol> joined(const std::string& new_text) {
    std::vector<Symbol> out;
    for (const auto& line : load_new(new_text)) out.insert(out.end(), line.begin(), line.end());
    return out;
}

// Alignments as JSON text, the same shape the CLI emits.
std::string align(const std::string& store_text, const std::string& new_text, std::size_t beam,
                  std::size_t max_stages, std::size_t top_k) {
    EngineParams p;
    p.beam_width = beam;
    p.max_stages = max_stages;
    p.top_k = top_k;
    auto as = build_alignments(load_store(store_text), joined(new_text), p);
    auto probs = relative_probabilities(as);
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t k = 0; k < as.size(); ++k) {
        auto j = alignment_json(as[k]);
        j["rank"] = k + 1;
        j["probability"] = probs[k];
        j["rendering"] = render_text(as[k]);
        list.push_back(std::move(j));
    }
    return list.dump();
}

std::string match(const std::string& store_text, const std::string& driving, const std::string& target,
                  std::size_t alternatives, double gap_penalty) {
    auto store = load_store(store_text);
    auto d = to_symbols(driving);
    nlohmann::json list = nlohmann::json::array();
    for (const auto& m : find_matches(store, d, to_symbols(target), MatchParams{alternatives, 1, gap_penalty}))
        list.push_back(match_json(m, d));
    return list.dump();
}

std::string learn_grammars(const std::vector<std::string>& lines, std::size_t pool, std::size_t passes) {
    std::vector<Sequence> corpus;
    for (const auto& l : lines) corpus.push_back(to_symbols(l));
    LearnParams p;
    p.pool_size = pool;
    p.passes = passes;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : learn(corpus, p))
        list.push_back({{"G", c.G}, {"E", c.E}, {"T", c.T}, {"store", serialize_store(c.store())}});
    return list.dump();
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> argv{"spma"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = cli_main(argv, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_spma, m) {
    m.doc() = "Multiple alignment, compression scoring and grammar learning";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DuplicateIdError>(m, "DuplicateIdError", PyExc_ValueError);

    m.def("symbol_cost", [](const std::string& store_text, const std::string& token) {
        return symbol_cost(load_store(store_text), Symbol(token));
    });
    m.def("normalize_store", [](const std::string& store_text) { return serialize_store(load_store(store_text)); });
    m.def("align", &align, py::arg("store_text"), py::arg("new_text"), py::arg("beam") = EngineParams{}.beam_width,
          py::arg("max_stages") = EngineParams{}.max_stages, py::arg("top_k") = EngineParams{}.top_k);
    m.def("match", &match, py::arg("store_text"), py::arg("driving"), py::arg("target"),
          py::arg("alternatives") = MatchParams{}.max_alternatives, py::arg("gap_penalty") = 0.0);
    m.def("learn", &learn_grammars, py::arg("lines"), py::arg("pool") = LearnParams{}.pool_size,
          py::arg("passes") = LearnParams{}.passes);
    m.def("corpus_names", &bundled_corpus_names);
    m.def("corpus", [](const std::string& name) {
        auto c = bundled_corpus(name);
        return py::make_tuple(c.store_text, c.new_text);
    });
    m.def("run_cli", &run_cli, py::arg("args"));
}
