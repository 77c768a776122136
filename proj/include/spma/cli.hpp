#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spma/alignment.hpp"
#include "spma/engine.hpp"
#include "spma/learner.hpp"

namespace spma {

enum class Command { match, align, encode, infer, probs, learn, route, stereo };
enum class OutputFormat { text, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
    Command command = Command::align;
    std::string store_path;
    std::string new_path;
    std::string corpus;  // bundled corpus name, used for paths left empty
    EngineParams engine;
    std::size_t pool_size = LearnParams{}.pool_size;
    std::size_t passes = LearnParams{}.passes;
    OutputFormat format = OutputFormat::text;
    std::string trace_path;  // learn only
};

std::optional<Command> parse_command(const std::string& name);

// Executes one command. Returns kExitOk, kExitUsage or kExitInput; messages go to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (argv[0] is the program name) and runs it.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Cities visited by a chain of "from code to" rows, ordered by the column of each
// row's first symbol. Empty when the rows do not form one connected chain.
std::vector<std::string> route_chain(const Alignment& alignment);

}  // namespace spma
