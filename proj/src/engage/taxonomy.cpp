#include "taxonomy.hpp"

namespace engage {

Taxonomy::Taxonomy(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw UsageError("taxonomy requires at least one category name");
    index_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw UsageError("empty category name at index " + std::to_string(i));
        auto [it, inserted] = index_.emplace(names_[i], static_cast<int>(i));
        if (!inserted) throw UsageError("duplicate category name: '" + names_[i] + "'");
    }
}

const std::string& Taxonomy::name(int id) const {
    if (id < 0 || id >= size()) throw InternalError("category id out of range: " + std::to_string(id));
    return names_[static_cast<std::size_t>(id)];
}

int Taxonomy::id(const std::string& name) const {
    const int r = find(name);
    if (r < 0) throw DataError("unknown category: '" + name + "'");
    return r;
}

int Taxonomy::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

Taxonomy Taxonomy::google_play() {
    return Taxonomy({
        "productivity", "social", "tools", "communication", "entertainment",
        "utilities", "sports", "music", "lifestyle", "arcade",
        "weather", "widgets", "medical", "transportation", "shopping",
        "video", "health-and-fitness", "finance", "navigation", "casino",
        "card", "word", "puzzle", "board", "books",
        "business", "travel", "food-and-drink", "photography", "comics",
        "adventure", "strategy", "racing", "family", "personalization",
        "news", "education", "action", "simulation", "trivia",
        "dating", "events", "house-and-home", "libraries-and-demo", "parenting",
    });
}

} // namespace engage
