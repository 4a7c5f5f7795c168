#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trdp {

/// Raised when a caller violates an operation's preconditions.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when checked integer arithmetic would leave the 64-bit range.
class ArithmeticOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Signed rational number with 64-bit numerator/denominator, always in lowest
/// terms with a positive denominator. Every operation is checked; results that
/// do not fit throw ArithmeticOverflow instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    /// Largest integer not greater than the value.
    std::int64_t floor() const;
    /// Smallest integer not less than the value.
    std::int64_t ceil() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "p" for integers, "p/q" otherwise.
    std::string to_string() const;
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Parses "w", "p/q", "-p/q" or a plain decimal "d.ddd" exactly.
Rational parse_rational(std::string_view text);

/// Nonnegative exact time instant or duration.
class Time {
public:
    constexpr Time() = default;
    Time(std::int64_t whole);  // NOLINT(google-explicit-constructor)
    Time(std::int64_t num, std::int64_t den);
    explicit Time(const Rational& value);

    const Rational& value() const { return value_; }
    std::int64_t num() const { return value_.num(); }
    std::int64_t den() const { return value_.den(); }
    bool is_zero() const { return value_.num() == 0; }

    Time& operator+=(const Time& rhs);
    /// Throws UsageError when the result would be negative.
    Time& operator-=(const Time& rhs);
    Time& operator*=(std::int64_t factor);

    friend Time operator+(Time a, const Time& b) { return a += b; }
    friend Time operator-(Time a, const Time& b) { return a -= b; }
    friend Time operator*(Time a, std::int64_t k) { return a *= k; }
    friend Time operator*(std::int64_t k, Time a) { return a *= k; }

    /// Exact quotient; throws UsageError unless `unit` divides this time.
    std::int64_t divide_exact(const Time& unit) const;

    friend bool operator==(const Time& a, const Time& b) = default;
    friend std::strong_ordering operator<=>(const Time& a, const Time& b) { return a.value_ <=> b.value_; }

    std::string to_string() const { return value_.to_string(); }

private:
    Rational value_;
};

std::ostream& operator<<(std::ostream& os, const Time& t);

/// Parses a nonnegative time ("w", "p/q" or "d.ddd").
Time parse_time(std::string_view text);

/// Greatest Time g such that every weight is an integer multiple of g.
Time gcd_all(std::span<const Time> weights);

/// round(value * resolution) / resolution with ties rounded up.
Time quantize(std::string_view value, std::int64_t resolution);

/// round(sqrt(squared) * resolution) / resolution with ties rounded up;
/// exact for integer `squared` (used for Euclidean grid move lengths).
Time quantize_sqrt(std::int64_t squared, std::int64_t resolution);

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);

}  // namespace checked

}  // namespace trdp
