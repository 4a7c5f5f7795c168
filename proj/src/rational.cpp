#include "trdp/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace trdp {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kMin = std::numeric_limits<std::int64_t>::min();

__int128 gcd_wide(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(__int128 v) {
    if (v > kMax || v < kMin) throw ArithmeticOverflow("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

}  // namespace

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw ArithmeticOverflow("tick addition overflow");
    return out;
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw ArithmeticOverflow("tick multiplication overflow");
    return out;
}

}  // namespace checked

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw UsageError("rational with zero denominator");
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rational r;
    r.num_ = narrow(num);
    r.den_ = narrow(den);
    return r;
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rational::ceil() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational& Rational::operator+=(const Rational& rhs) {
    if (den_ == rhs.den_) {
        *this = from_wide(static_cast<__int128>(num_) + rhs.num_, den_);
        return *this;
    }
    __int128 g = gcd_wide(den_, rhs.den_);
    __int128 lhs_scale = rhs.den_ / g;
    __int128 rhs_scale = den_ / g;
    *this = from_wide(num_ * lhs_scale + rhs.num_ * rhs_scale, den_ * lhs_scale);
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    // Cross-reduce first so intermediate products stay small.
    __int128 g1 = gcd_wide(num_, rhs.den_);
    __int128 g2 = gcd_wide(rhs.num_, den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    __int128 n = (num_ / g1) * (rhs.num_ / g2);
    __int128 d = (den_ / g2) * (rhs.den_ / g1);
    *this = from_wide(n, d);
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw UsageError("rational division by zero");
    return *this *= from_wide(rhs.den_, rhs.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

namespace {

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (ec == std::errc::result_out_of_range) throw ArithmeticOverflow("number too large: " + std::string(whole));
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
        throw UsageError("malformed number: '" + std::string(whole) + "'");
    return out;
}

// Exact value of an unsigned decimal literal "ddd" or "ddd.ddd".
Rational parse_unsigned_decimal(std::string_view text, std::string_view whole) {
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return Rational(parse_int(text, whole));
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw UsageError("malformed number: '" + std::string(whole) + "'");
    // Trailing zeros carry no value; dropping them keeps 10^n small.
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);
    Rational value(int_part.empty() ? 0 : parse_int(int_part, whole));
    if (frac_part.empty()) return value;
    if (frac_part.size() > 18) throw ArithmeticOverflow("too many decimal places: " + std::string(whole));
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    return value + Rational(parse_int(frac_part, whole), scale);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view whole = text;
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (text.empty()) throw UsageError("empty number");
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t num = parse_int(text.substr(0, slash), whole);
        std::int64_t den = parse_int(text.substr(slash + 1), whole);
        if (den == 0) throw UsageError("zero denominator in '" + std::string(whole) + "'");
        value = Rational(num, den);
    } else {
        value = parse_unsigned_decimal(text, whole);
    }
    return negative ? -value : value;
}

Time::Time(std::int64_t whole) : Time(Rational(whole)) {}

Time::Time(std::int64_t num, std::int64_t den) : Time(Rational(num, den)) {}

Time::Time(const Rational& value) : value_(value) {
    if (value.sign() < 0) throw UsageError("negative time " + value.to_string());
}

Time& Time::operator+=(const Time& rhs) {
    value_ += rhs.value_;
    return *this;
}

Time& Time::operator-=(const Time& rhs) {
    Rational out = value_ - rhs.value_;
    if (out.sign() < 0) throw UsageError("time underflow: " + to_string() + " - " + rhs.to_string());
    value_ = out;
    return *this;
}

Time& Time::operator*=(std::int64_t factor) {
    if (factor < 0) throw UsageError("negative time scale factor");
    value_ *= Rational(factor);
    return *this;
}

std::int64_t Time::divide_exact(const Time& unit) const {
    if (unit.is_zero()) throw UsageError("division by zero time");
    Rational q = value_ / unit.value_;
    if (!q.is_integer()) throw UsageError(to_string() + " is not a multiple of " + unit.to_string());
    return q.num();
}

std::ostream& operator<<(std::ostream& os, const Time& t) { return os << t.to_string(); }

Time parse_time(std::string_view text) {
    Rational value = parse_rational(text);
    if (value.sign() < 0) throw UsageError("negative time '" + std::string(text) + "'");
    return Time(value);
}

Time gcd_all(std::span<const Time> weights) {
    if (weights.empty()) throw UsageError("gcd_all of an empty set");
    // gcd(a/b, c/d) = gcd(a, c) / lcm(b, d) for fractions in lowest terms.
    std::int64_t num = 0;
    std::int64_t den = 1;
    for (const Time& w : weights) {
        if (w.is_zero()) throw UsageError("gcd_all requires strictly positive weights");
        num = std::gcd(num, w.num());
        den = checked::mul(den / std::gcd(den, w.den()), w.den());
    }
    return Time(num, den);
}

Time quantize(std::string_view value, std::int64_t resolution) {
    if (resolution < 1) throw UsageError("resolution must be >= 1");
    Rational exact = parse_rational(value);
    if (exact.sign() < 0) throw UsageError("cannot quantize negative value '" + std::string(value) + "'");
    Rational scaled = exact * Rational(resolution) + Rational(1, 2);
    return Time(scaled.floor(), resolution);
}

Time quantize_sqrt(std::int64_t squared, std::int64_t resolution) {
    if (squared < 0) throw UsageError("cannot quantize sqrt of a negative value");
    if (resolution < 1) throw UsageError("resolution must be >= 1");
    // round(sqrt(m)) with m = squared * r^2: s = isqrt(m), round up iff m >= s^2 + s + 1.
    __int128 m = static_cast<__int128>(squared) * resolution * resolution;
    __int128 s = static_cast<__int128>(std::sqrt(static_cast<long double>(m)));
    while (s * s > m) --s;
    while ((s + 1) * (s + 1) <= m) ++s;
    if (m >= s * s + s + 1) ++s;
    return Time(narrow(s), resolution);
}

}  // namespace trdp
