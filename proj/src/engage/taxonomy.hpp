#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace engage {

/// Dense, stable app-category registry. Ids are assigned in input order.
class Taxonomy {
public:
    Taxonomy() = default;
    explicit Taxonomy(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int id) const;
    int id(const std::string& name) const;            // throws on unknown
    int find(const std::string& name) const;          // -1 on unknown
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const Taxonomy& other) const { return names_ == other.names_; }

    /// The 45 Google-Play-style category names used for full-scale runs.
    static Taxonomy google_play();

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

inline Taxonomy register_taxonomy(std::vector<std::string> names) {
    return Taxonomy(std::move(names));
}

} // namespace engage
