#pragma once

#include <map>
#include <string>
#include <vector>

#include "ingest.hpp"
#include "types.hpp"

namespace engage {

/// Split a time-sorted event stream at inactivity gaps. The gap is measured
/// from the end of the previous event (start + duration) to the start of the
/// next one; a gap of exactly gap_seconds continues the session.
std::vector<Session> sessionize(const std::vector<UsageEvent>& events,
                                double gap_seconds = 300.0);

/// Collapse maximal runs of consecutive same-app events into DwellRecords.
/// session_index and local time fields are filled by the caller-facing
/// overload below; this one leaves session_index = -1.
std::vector<DwellRecord> aggregate_dwell(const Session& session);

struct SessionizedUser {
    std::vector<Session> sessions;
    std::vector<DwellRecord> records; // time order, session_index + time fields set
};

struct SessionizedCorpus {
    Taxonomy taxonomy;
    std::map<std::string, UserProfile> profiles;
    std::map<std::string, SessionizedUser> users;

    std::size_t record_count() const;
    std::vector<const DwellRecord*> all_records() const; // user order, then time
};

SessionizedCorpus sessionize_corpus(const Corpus& corpus, double gap_seconds = 300.0,
                                    int timezone_offset_minutes = 0);

} // namespace engage
