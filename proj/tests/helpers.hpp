#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "engage/ingest.hpp"
#include "engage/sessionize.hpp"

namespace testutil {

inline engage::UserProfile profile(const std::string& user,
                                   engage::Gender gender = engage::Gender::Male,
                                   engage::AgeBand age = engage::AgeBand::A25_34,
                                   engage::DeviceType device = engage::DeviceType::Phone,
                                   engage::Os os = engage::Os::Android) {
    engage::UserProfile p;
    p.user_id = user;
    p.gender = gender;
    p.age_band = age;
    p.device_type = device;
    p.os = os;
    return p;
}

inline engage::UsageEvent event(const std::string& user, std::int64_t t, const std::string& app,
                                int category, double duration) {
    engage::UsageEvent e;
    e.user_id = user;
    e.timestamp = t;
    e.app_id = app;
    e.category = category;
    e.duration_seconds = duration;
    return e;
}

/// In-memory corpus from explicit events; profiles default to the same shape.
inline engage::Corpus corpus(const std::vector<std::string>& taxonomy,
                             const std::vector<engage::UsageEvent>& events) {
    engage::Corpus c;
    c.taxonomy = engage::Taxonomy(taxonomy);
    for (const auto& e : events) {
        c.events[e.user_id].push_back(e);
        if (!c.profiles.count(e.user_id)) c.profiles.emplace(e.user_id, profile(e.user_id));
    }
    for (auto& [user, evs] : c.events)
        std::stable_sort(evs.begin(), evs.end(), [](const auto& a, const auto& b) {
            return a.timestamp < b.timestamp;
        });
    return c;
}

/// Unique scratch directory under the build tree; wiped on construction.
class TempDir {
public:
    explicit TempDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("engage_test_" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

} // namespace testutil
