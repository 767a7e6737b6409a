#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace engage {

enum class AgeBand : int { A13_17 = 0, A18_24, A25_34, A35_54, A55_PLUS };
enum class Gender : int { Male = 0, Female };
enum class DeviceType : int { Phone = 0, Tablet };
enum class Os : int { Android = 0, Ios };

enum class EngagementLevel : int { Light = 0, Medium = 1, Intensive = 2 };

constexpr int kNumAgeBands = 5;
constexpr int kNumLevels = 3;

AgeBand parse_age_band(const std::string& s);
Gender parse_gender(const std::string& s);
DeviceType parse_device_type(const std::string& s);
Os parse_os(const std::string& s);

std::string to_string(AgeBand v);
std::string to_string(Gender v);
std::string to_string(DeviceType v);
std::string to_string(Os v);
std::string to_string(EngagementLevel v);

struct UserProfile {
    std::string user_id;
    AgeBand age_band{};
    Gender gender{};
    DeviceType device_type{};
    Os os{};
};

struct UsageEvent {
    std::string user_id;
    std::int64_t timestamp = 0; // epoch seconds, UTC
    std::string app_id;
    int category = -1; // taxonomy id
    double duration_seconds = 0.0;
};

struct Session {
    std::string user_id;
    std::vector<UsageEvent> events;
    std::int64_t start = 0;
    std::int64_t end = 0; // start + duration of last event
};

struct DwellRecord {
    std::string user_id;
    std::string app_id;
    int category = -1;
    int session_index = -1;
    std::int64_t start = 0;
    double dwell_seconds = 0.0;
    int hour_of_day = 0;  // 0..23 local
    int day_of_week = 0;  // 0..6, Monday = 0
};

// Local hour / weekday from a UTC timestamp with a fixed minute offset.
// Offset range matches real-world zones, [-720, +840] minutes.
std::pair<int, int> local_time_fields(std::int64_t timestamp, int timezone_offset_minutes);

} // namespace engage
