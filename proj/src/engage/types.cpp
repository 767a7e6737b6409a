#include "types.hpp"

namespace engage {

AgeBand parse_age_band(const std::string& s) {
    if (s == "13-17") return AgeBand::A13_17;
    if (s == "18-24") return AgeBand::A18_24;
    if (s == "25-34") return AgeBand::A25_34;
    if (s == "35-54") return AgeBand::A35_54;
    if (s == "55+") return AgeBand::A55_PLUS;
    throw DataError("unknown age band: '" + s + "'");
}

Gender parse_gender(const std::string& s) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    throw DataError("unknown gender: '" + s + "'");
}

DeviceType parse_device_type(const std::string& s) {
    if (s == "phone") return DeviceType::Phone;
    if (s == "tablet") return DeviceType::Tablet;
    throw DataError("unknown device type: '" + s + "'");
}

Os parse_os(const std::string& s) {
    if (s == "android") return Os::Android;
    if (s == "ios") return Os::Ios;
    throw DataError("unknown os: '" + s + "'");
}

std::string to_string(AgeBand v) {
    switch (v) {
        case AgeBand::A13_17: return "13-17";
        case AgeBand::A18_24: return "18-24";
        case AgeBand::A25_34: return "25-34";
        case AgeBand::A35_54: return "35-54";
        case AgeBand::A55_PLUS: return "55+";
    }
    throw InternalError("bad age band value");
}

std::string to_string(Gender v) {
    return v == Gender::Male ? "male" : "female";
}

std::string to_string(DeviceType v) {
    return v == DeviceType::Phone ? "phone" : "tablet";
}

std::string to_string(Os v) {
    return v == Os::Android ? "android" : "ios";
}

std::string to_string(EngagementLevel v) {
    switch (v) {
        case EngagementLevel::Light: return "light";
        case EngagementLevel::Medium: return "medium";
        case EngagementLevel::Intensive: return "intensive";
    }
    throw InternalError("bad engagement level value");
}

std::pair<int, int> local_time_fields(std::int64_t timestamp, int timezone_offset_minutes) {
    if (timezone_offset_minutes < -720 || timezone_offset_minutes > 840)
        throw UsageError("timezone offset out of range [-720, 840]: " +
                         std::to_string(timezone_offset_minutes));
    const std::int64_t local = timestamp + static_cast<std::int64_t>(timezone_offset_minutes) * 60;
    std::int64_t days = local / 86400;
    std::int64_t secs = local % 86400;
    if (secs < 0) {
        secs += 86400;
        days -= 1;
    }
    const int hour = static_cast<int>(secs / 3600);
    // 1970-01-01 was a Thursday; Monday = 0 -> Thursday = 3.
    const int weekday = static_cast<int>(((days % 7) + 7 + 3) % 7);
    return {hour, weekday};
}

} // namespace engage
