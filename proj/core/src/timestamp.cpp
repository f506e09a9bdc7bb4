#include "spotsim/timestamp.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace spotsim {

namespace {

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) return false;
    for (std::size_t i = 0; i < len; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[pos + i]))) return false;
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc() && ptr == text.data() + pos + len;
}

}  // namespace

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
    // Minimum form: YYYY-MM-DDTHH:MM:SSZ (20 chars).
    if (text.size() < 20) return std::nullopt;

    int year, month, day, hour, minute, second;
    if (!parse_fixed_int(text, 0, 4, year)) return std::nullopt;
    if (text[4] != '-') return std::nullopt;
    if (!parse_fixed_int(text, 5, 2, month)) return std::nullopt;
    if (text[7] != '-') return std::nullopt;
    if (!parse_fixed_int(text, 8, 2, day)) return std::nullopt;
    if (text[10] != 'T' && text[10] != 't') return std::nullopt;
    if (!parse_fixed_int(text, 11, 2, hour)) return std::nullopt;
    if (text[13] != ':') return std::nullopt;
    if (!parse_fixed_int(text, 14, 2, minute)) return std::nullopt;
    if (text[16] != ':') return std::nullopt;
    if (!parse_fixed_int(text, 17, 2, second)) return std::nullopt;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }

    if (pos >= text.size()) return std::nullopt;
    int offset_minutes = 0;
    const char tail = text[pos];
    if (tail == 'Z' || tail == 'z') {
        ++pos;
    } else if (tail == '+' || tail == '-') {
        const int sign = tail == '-' ? -1 : 1;
        ++pos;
        int oh = 0, om = 0;
        if (!parse_fixed_int(text, pos, 2, oh)) return std::nullopt;
        pos += 2;
        if (pos < text.size() && text[pos] == ':') ++pos;
        if (pos + 2 <= text.size()) {
            if (!parse_fixed_int(text, pos, 2, om)) return std::nullopt;
            pos += 2;
        }
        if (oh > 18 || om > 59) return std::nullopt;
        offset_minutes = sign * (oh * 60 + om);
    } else {
        return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;

    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

    const seconds local = sys_days{ymd}.time_since_epoch() + hours{hour} + minutes{minute} + seconds{second};
    const sys_seconds utc{local - minutes{offset_minutes}};
    return Timestamp{utc, minutes{offset_minutes}};
}

std::string Timestamp::to_iso8601() const {
    using namespace std::chrono;
    const seconds local = utc_.time_since_epoch() + offset_;
    auto day_count = floor<days>(local);
    seconds tod = local - day_count;
    const year_month_day ymd{sys_days{day_count}};
    const int h = static_cast<int>(tod.count() / 3600);
    const int m = static_cast<int>((tod.count() / 60) % 60);
    const int s = static_cast<int>(tod.count() % 60);

    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m, s);
    std::string out = buf;

    const long off = offset_.count();
    if (off == 0) {
        out += 'Z';
    } else {
        const long abs_off = off < 0 ? -off : off;
        std::snprintf(buf, sizeof buf, "%c%02ld:%02ld", off < 0 ? '-' : '+', abs_off / 60, abs_off % 60);
        out += buf;
    }
    return out;
}

}  // namespace spotsim
