#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace earnsignal {

/// Calendar date (UTC), stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    constexpr Date(int year, unsigned month, unsigned day)
        : days_(std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                            std::chrono::day{day}}) {}

    /// Strict `YYYY-MM-DD`; returns nullopt for anything else, including impossible dates.
    static std::optional<Date> parse(std::string_view text) {
        if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
        int y = 0;
        unsigned m = 0;
        unsigned d = 0;
        if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m) ||
            !parse_digits(text.substr(8, 2), d)) {
            return std::nullopt;
        }
        std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
        if (!ymd.ok()) return std::nullopt;
        return Date{std::chrono::sys_days{ymd}};
    }

    std::string iso() const {
        std::chrono::year_month_day ymd{days_};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    /// 0 = Monday ... 6 = Sunday.
    int day_of_week() const {
        return static_cast<int>(std::chrono::weekday{days_}.iso_encoding()) - 1;
    }

    constexpr long serial() const { return days_.time_since_epoch().count(); }
    constexpr std::chrono::sys_days sys_days() const { return days_; }

    constexpr Date plus_days(long n) const { return Date{days_ + std::chrono::days{n}}; }
    constexpr long days_until(const Date& later) const { return (later.days_ - days_).count(); }

    constexpr auto operator<=>(const Date&) const = default;

private:
    template <typename T>
    static bool parse_digits(std::string_view s, T& out) {
        for (char c : s) {
            if (c < '0' || c > '9') return false;
        }
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size();
    }

    std::chrono::sys_days days_{};
};

}  // namespace earnsignal
