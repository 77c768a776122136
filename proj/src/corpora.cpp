#include "spma/corpora.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace spma {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kCorpusFiles[];
extern const std::size_t kCorpusFileCount;
}  // namespace detail

std::optional<std::string_view> bundled_file(std::string_view file_name) {
    for (std::size_t i = 0; i < detail::kCorpusFileCount; ++i)
        if (detail::kCorpusFiles[i].first == file_name) return detail::kCorpusFiles[i].second;
    return std::nullopt;
}

std::vector<std::string> bundled_corpus_names() {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < detail::kCorpusFileCount; ++i) {
        std::string_view f = detail::kCorpusFiles[i].first;
        names.emplace_back(f.substr(0, f.rfind('.')));
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

Corpus bundled_corpus(std::string_view name) {
    Corpus c;
    c.name = name;
    auto store = bundled_file(std::string(name) + ".store");
    auto fresh = bundled_file(std::string(name) + ".new");
    if (!store && !fresh) throw std::out_of_range("no bundled corpus '" + std::string(name) + "'");
    if (store) c.store_text = *store;
    if (fresh) c.new_text = *fresh;
    return c;
}

}  // namespace spma
