#include "spma/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spma/corpora.hpp"
#include "spma/errors.hpp"
#include "spma/render.hpp"

namespace spma {

namespace {

const std::map<std::string, Command> kCommands{
    {"match", Command::match}, {"align", Command::align}, {"encode", Command::encode},
    {"infer", Command::infer}, {"probs", Command::probs}, {"learn", Command::learn},
    {"route", Command::route}, {"stereo", Command::stereo}};

const std::map<std::string, std::string> kDescriptions{
    {"match", "Best pairwise matches of New against each Old pattern"},
    {"align", "Ranked multiple alignments with scores and renderings"},
    {"encode", "Code of the best alignment"},
    {"infer", "Symbols inferred from the best alignment"},
    {"probs", "Relative probabilities of the competing alignments"},
    {"learn", "Learn a grammar from the New lines"},
    {"route", "Chain legs between two cities (bundled route corpus by default)"},
    {"stereo", "Match two displaced digit strings (bundled stereo corpus by default)"}};

struct InputError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError{"cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw InputError{"cannot read '" + path + "'"};
    return ss.str();
}

struct Inputs {
    std::string store_text;
    std::string new_text;
    std::string store_name;
    std::string new_name;
};

Inputs gather(const RunConfig& cfg) {
    std::string corpus = cfg.corpus;
    if (corpus.empty() && cfg.command == Command::route) corpus = "route";
    if (corpus.empty() && cfg.command == Command::stereo) corpus = "stereo";
    Inputs in;
    std::optional<Corpus> bundled;
    if (!corpus.empty()) {
        try {
            bundled = bundled_corpus(corpus);
        } catch (const std::out_of_range&) {
            throw InputError{"no bundled corpus named '" + corpus + "'"};
        }
    }
    if (!cfg.store_path.empty()) {
        in.store_text = read_file(cfg.store_path);
        in.store_name = cfg.store_path;
    } else if (bundled) {
        in.store_text = bundled->store_text;
        in.store_name = corpus + ".store";
    }
    if (!cfg.new_path.empty()) {
        in.new_text = read_file(cfg.new_path);
        in.new_name = cfg.new_path;
    } else if (bundled) {
        in.new_text = bundled->new_text;
        in.new_name = corpus + ".new";
    }
    return in;
}

std::string fixed(double v, int digits = 4) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

std::string describe_hits(const MatchResult& m, std::span<const Symbol> driving) {
    std::string s;
    for (const auto& h : m.hits) {
        if (!s.empty()) s += ' ';
        s += driving[h.driving_index].str() + "(" + std::to_string(h.driving_index) + "," +
             std::to_string(h.target_index) + ")";
    }
    return s;
}

int emit_match(const PatternStore& store, const std::vector<Symbol>& fresh, const RunConfig& cfg,
               std::ostream& out) {
    MatchParams mp{cfg.engine.alternatives, 1, cfg.engine.gap_penalty};
    nlohmann::json all = nlohmann::json::array();
    for (const auto& p : store.patterns()) {
        auto results = find_matches(store, fresh, p.symbols, mp);
        if (cfg.format == OutputFormat::json) {
            nlohmann::json rs = nlohmann::json::array();
            for (const auto& m : results) rs.push_back(match_json(m, fresh));
            all.push_back({{"pattern_id", p.id}, {"matches", rs}});
            continue;
        }
        out << "pattern " << p.id << '\n';
        for (std::size_t k = 0; k < results.size(); ++k)
            out << "  " << k + 1 << " score " << fixed(results[k].score) << " hits "
                << results[k].hits.size() << ": " << describe_hits(results[k], fresh) << '\n';
    }
    if (cfg.format == OutputFormat::json) out << nlohmann::json{{"results", all}}.dump(2) << '\n';
    return kExitOk;
}

int emit_alignments(const PatternStore& store, const std::vector<Symbol>& fresh, const RunConfig& cfg,
                    std::ostream& out) {
    const auto alignments = build_alignments(store, fresh, cfg.engine);
    const auto probs = relative_probabilities(alignments);
    const Alignment& top = alignments.front();
    const bool json = cfg.format == OutputFormat::json;

    switch (cfg.command) {
        case Command::encode:
            if (json)
                out << nlohmann::json{{"encoding", alignment_json(top)["encoding"]},
                                      {"encoding_bits", top.encoding_bits}}
                           .dump(2)
                    << '\n';
            else
                out << join(derive_encoding(top).code) << '\n';
            return kExitOk;
        case Command::infer:
            if (json) {
                out << nlohmann::json{{"inferred", alignment_json(top)["inferred"]}}.dump(2) << '\n';
            } else {
                for (const auto& i : infer_unseen(top)) out << i.token.str() << ' ' << i.pattern_id << '\n';
            }
            return kExitOk;
        case Command::probs:
            if (json) {
                nlohmann::json rows = nlohmann::json::array();
                for (std::size_t k = 0; k < alignments.size(); ++k)
                    rows.push_back({{"rank", k + 1},
                                    {"compression_difference", alignments[k].compression_difference},
                                    {"probability", probs[k]},
                                    {"pattern_ids", alignments[k].pattern_ids()}});
                out << nlohmann::json{{"alignments", rows}}.dump(2) << '\n';
            } else {
                for (std::size_t k = 0; k < alignments.size(); ++k)
                    out << k + 1 << ' ' << fixed(alignments[k].compression_difference) << ' '
                        << fixed(probs[k], 6) << '\n';
            }
            return kExitOk;
        default:
            break;
    }

    std::vector<std::string> chain;
    if (cfg.command == Command::route) chain = route_chain(top);
    if (json) {
        nlohmann::json list = nlohmann::json::array();
        for (std::size_t k = 0; k < alignments.size(); ++k) {
            auto j = alignment_json(alignments[k]);
            j["rank"] = k + 1;
            j["probability"] = probs[k];
            list.push_back(std::move(j));
        }
        nlohmann::json doc{{"alignments", list}};
        if (cfg.command == Command::route) doc["route"] = chain;
        out << doc.dump(2) << '\n';
        return kExitOk;
    }
    for (std::size_t k = 0; k < alignments.size(); ++k) {
        const auto& a = alignments[k];
        out << "alignment " << k + 1 << "  CD " << fixed(a.compression_difference) << "  P "
            << fixed(probs[k], 6) << "  code: " << join(derive_encoding(a).code) << '\n';
        out << render_text(a) << '\n';
    }
    if (cfg.command == Command::route) {
        out << "route:";
        for (std::size_t i = 0; i < chain.size(); ++i) out << (i ? " -> " : " ") << chain[i];
        out << '\n';
    }
    return kExitOk;
}

int emit_learn(const std::vector<Sequence>& corpus, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (corpus.empty()) {
        err << "learn: the corpus has no sequences\n";
        return kExitUsage;
    }
    LearnParams lp;
    lp.engine = cfg.engine;
    lp.pool_size = cfg.pool_size;
    lp.passes = cfg.passes;
    std::ofstream trace_file;
    if (!cfg.trace_path.empty()) {
        trace_file.open(cfg.trace_path);
        if (!trace_file) throw InputError{"cannot write '" + cfg.trace_path + "'"};
    }
    const auto ranked = learn(corpus, lp, trace_file.is_open() ? &trace_file : nullptr);
    const auto& best = ranked.front();
    if (cfg.format == OutputFormat::json) {
        nlohmann::json ps = nlohmann::json::array();
        for (const auto& p : best.patterns)
            ps.push_back({{"id", p.id}, {"frequency", p.frequency}, {"body", pattern_body(p)}});
        out << nlohmann::json{{"G", best.G}, {"E", best.E}, {"T", best.T}, {"patterns", ps}}.dump(2) << '\n';
    } else {
        out << "# G " << fixed(best.G) << "  E " << fixed(best.E) << "  T " << fixed(best.T) << '\n';
        out << serialize_store(best.store());
    }
    return kExitOk;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    auto it = kCommands.find(name);
    if (it == kCommands.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> route_chain(const Alignment& a) {
    std::vector<const Row*> legs;
    for (std::size_t r = 1; r < a.row_count(); ++r) legs.push_back(&a.rows()[r]);
    if (legs.empty()) return {};
    std::sort(legs.begin(), legs.end(), [](const Row* x, const Row* y) { return x->columns.front() < y->columns.front(); });
    std::vector<std::string> chain{legs.front()->pattern->symbols.front().str()};
    for (std::size_t i = 0; i < legs.size(); ++i) {
        if (i > 0 && legs[i]->columns.front() != legs[i - 1]->columns.back()) return {};
        chain.push_back(legs[i]->pattern->symbols.back().str());
    }
    return chain;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Inputs in;
    try {
        in = gather(cfg);
    } catch (const InputError& e) {
        err << "error: " << e.message << '\n';
        return kExitInput;
    }
    if (in.new_name.empty()) {
        err << "error: no New input; give --new PATH or --corpus NAME\n";
        return kExitUsage;
    }

    PatternStore store;
    std::vector<Sequence> lines;
    try {
        store = load_store(in.store_text);
    } catch (const ParseError& e) {
        err << "error: " << in.store_name << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const DuplicateIdError& e) {
        err << "error: " << in.store_name << ": " << e.what() << '\n';
        return kExitInput;
    }
    try {
        lines = load_new(in.new_text);
    } catch (const ParseError& e) {
        err << "error: " << in.new_name << ": " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (cfg.command == Command::learn) return emit_learn(lines, cfg, out, err);
        // Several New lines form one New pattern, in file order.
        std::vector<Symbol> fresh;
        for (const auto& l : lines) fresh.insert(fresh.end(), l.begin(), l.end());
        if (fresh.empty()) {
            err << "error: " << in.new_name << ": no New symbols\n";
            return kExitInput;
        }
        if (cfg.command == Command::match) return emit_match(store, fresh, cfg, out);
        return emit_alignments(store, fresh, cfg, out);
    } catch (const InputError& e) {
        err << "error: " << e.message << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiple-alignment engine over one-dimensional symbol patterns", "spma"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "text";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--store", cfg.store_path, "Old pattern store file");
        sub->add_option("--new", cfg.new_path, "New pattern file");
        sub->add_option("--corpus", cfg.corpus, "Bundled corpus name for paths not given");
        sub->add_option("--beam", cfg.engine.beam_width, "Beam width")->check(CLI::PositiveNumber);
        sub->add_option("--max-stages", cfg.engine.max_stages, "Maximum stages")->check(CLI::PositiveNumber);
        sub->add_option("--top", cfg.engine.top_k, "Alignments to report")->check(CLI::PositiveNumber);
        sub->add_option("--alts", cfg.engine.alternatives, "Pairwise matches kept per pattern")
            ->check(CLI::PositiveNumber);
        sub->add_option("--gap-penalty", cfg.engine.gap_penalty, "Gap penalty in bits")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--pool", cfg.pool_size, "Learner candidate pool size")->check(CLI::PositiveNumber);
        sub->add_option("--passes", cfg.passes, "Learner passes over the corpus")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--trace", cfg.trace_path, "Learner trace file");
    };
    for (const auto& [name, cmd] : kCommands) {
        auto* sub = app.add_subcommand(name, kDescriptions.at(name));
        add_common(sub);
        sub->callback([&cfg, cmd = cmd] { cfg.command = cmd; });
    }

    std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::Error& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }
    cfg.format = format == "json" ? OutputFormat::json : OutputFormat::text;
    return run(cfg, out, err);
}

}  // namespace spma
