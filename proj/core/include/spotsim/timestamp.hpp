#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace spotsim {

// ISO-8601 instant at second precision, e.g. "2015-03-12T00:01:10-08:00".
// The UTC offset is kept so a record re-serializes in its original local
// form; ordering and equality of the instant use UTC time only.
class Timestamp {
public:
    Timestamp() = default;
    Timestamp(std::chrono::sys_seconds utc, std::chrono::minutes offset)
        : utc_(utc), offset_(offset) {}

    // Accepts "YYYY-MM-DDTHH:MM:SS" followed by "Z", "+HH:MM", "-HH:MM",
    // "+HHMM" or "-HHMM" (the AWS CLI emits the colon-less form). An
    // optional fractional-second part is accepted and truncated.
    static std::optional<Timestamp> parse(std::string_view text);

    std::chrono::sys_seconds utc() const { return utc_; }
    std::chrono::minutes offset() const { return offset_; }

    std::string to_iso8601() const;

    friend bool operator==(const Timestamp& lhs, const Timestamp& rhs) {
        return lhs.utc_ == rhs.utc_;
    }
    friend bool operator<(const Timestamp& lhs, const Timestamp& rhs) {
        return lhs.utc_ < rhs.utc_;
    }

private:
    std::chrono::sys_seconds utc_{};
    std::chrono::minutes offset_{0};
};

}  // namespace spotsim
