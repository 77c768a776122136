#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spma {

// A bundled example: store text (may be empty) and New text.
struct Corpus {
    std::string name;
    std::string store_text;
    std::string new_text;
};

std::vector<std::string> bundled_corpus_names();

// Throws std::out_of_range for an unknown name.
Corpus bundled_corpus(std::string_view name);

// Raw contents of one embedded file such as "kittens.store".
std::optional<std::string_view> bundled_file(std::string_view file_name);

}  // namespace spma
