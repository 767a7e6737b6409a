#include "sessionize.hpp"

namespace engage {

std::vector<Session> sessionize(const std::vector<UsageEvent>& events, double gap_seconds) {
    std::vector<Session> sessions;
    if (events.empty()) return sessions;

    Session current;
    current.user_id = events.front().user_id;
    double prev_end = 0.0;
    for (const auto& ev : events) {
        if (!current.events.empty() && ev.timestamp < current.events.back().timestamp)
            throw DataError("events not sorted by timestamp for user " + ev.user_id);
        if (current.events.empty()) {
            current.start = ev.timestamp;
        } else {
            const double gap = static_cast<double>(ev.timestamp) - prev_end;
            if (gap > gap_seconds) {
                current.end = static_cast<std::int64_t>(prev_end);
                sessions.push_back(std::move(current));
                current = Session{};
                current.user_id = ev.user_id;
                current.start = ev.timestamp;
            }
        }
        prev_end = static_cast<double>(ev.timestamp) + ev.duration_seconds;
        current.events.push_back(ev);
    }
    current.end = static_cast<std::int64_t>(prev_end);
    sessions.push_back(std::move(current));
    return sessions;
}

std::vector<DwellRecord> aggregate_dwell(const Session& session) {
    std::vector<DwellRecord> records;
    for (const auto& ev : session.events) {
        if (!records.empty() && records.back().app_id == ev.app_id) {
            records.back().dwell_seconds += ev.duration_seconds;
        } else {
            DwellRecord r;
            r.user_id = ev.user_id;
            r.app_id = ev.app_id;
            r.category = ev.category;
            r.start = ev.timestamp;
            r.dwell_seconds = ev.duration_seconds;
            records.push_back(std::move(r));
        }
    }
    return records;
}

std::size_t SessionizedCorpus::record_count() const {
    std::size_t n = 0;
    for (const auto& [user, su] : users) n += su.records.size();
    return n;
}

std::vector<const DwellRecord*> SessionizedCorpus::all_records() const {
    std::vector<const DwellRecord*> out;
    out.reserve(record_count());
    for (const auto& [user, su] : users)
        for (const auto& r : su.records) out.push_back(&r);
    return out;
}

SessionizedCorpus sessionize_corpus(const Corpus& corpus, double gap_seconds,
                                    int timezone_offset_minutes) {
    SessionizedCorpus out;
    out.taxonomy = corpus.taxonomy;
    out.profiles = corpus.profiles;
    for (const auto& [user, evs] : corpus.events) {
        SessionizedUser su;
        su.sessions = sessionize(evs, gap_seconds);
        for (std::size_t si = 0; si < su.sessions.size(); ++si) {
            auto recs = aggregate_dwell(su.sessions[si]);
            for (auto& r : recs) {
                r.session_index = static_cast<int>(si);
                const auto [hour, weekday] = local_time_fields(r.start, timezone_offset_minutes);
                r.hour_of_day = hour;
                r.day_of_week = weekday;
                su.records.push_back(std::move(r));
            }
        }
        out.users.emplace(user, std::move(su));
    }
    return out;
}

} // namespace engage
