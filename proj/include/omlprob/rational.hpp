#pragma once

// Exact rational scalar used for every probability value in the library.

#include <gmpxx.h>

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace omlprob {

using Rational = mpq_class;

class RationalParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

inline std::string_view strip_sign(std::string_view s, bool& negative) {
    negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    return s;
}

}  // namespace detail

/// Parses "n", "n/d" or a plain decimal ("0.15", "-2.5e-1" is not accepted).
/// Decimals convert exactly over a power-of-ten denominator.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> RationalParseError {
        return RationalParseError("not an exact rational: \"" + std::string(text) + "\"");
    };
    bool negative = false;
    std::string_view body = detail::strip_sign(text, negative);
    if (body.empty()) throw fail();

    Rational out;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        std::string_view num = body.substr(0, slash);
        std::string_view den = body.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den)) throw fail();
        mpz_class d(std::string(den), 10);
        if (d == 0) throw RationalParseError("zero denominator in \"" + std::string(text) + "\"");
        out = Rational(mpz_class(std::string(num), 10), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        std::string_view whole = body.substr(0, dot);
        std::string_view frac = body.substr(dot + 1);
        if (whole.empty() && frac.empty()) throw fail();
        if ((!whole.empty() && !detail::all_digits(whole)) || (!frac.empty() && !detail::all_digits(frac))) {
            throw fail();
        }
        mpz_class den = 1;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        std::string digits = std::string(whole) + std::string(frac);
        out = Rational(mpz_class(digits.empty() ? std::string("0") : digits, 10), den);
    } else {
        if (!detail::all_digits(body)) throw fail();
        out = Rational(mpz_class(std::string(body), 10));
    }
    out.canonicalize();
    if (negative) out = -out;
    return out;
}

/// Converts a binary double through its shortest round-trip decimal form, so
/// that a JSON literal such as 0.15 becomes exactly 3/20.
inline Rational rational_from_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
    if (ec != std::errc()) throw RationalParseError("cannot convert floating value");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(end - buf)));
}

/// Lowest-terms "num/den", or just "num" when the denominator is one.
inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool in_unit_interval(const Rational& q) { return q >= 0 && q <= 1; }

}  // namespace omlprob
