#pragma once

#include <cstdint>
#include <compare>
#include <iosfwd>
#include <optional>
#include <string>

#include "ramq/errors.hpp"

namespace ramq {

// Exact rational number, always stored reduced with positive denominator.
// Components are 64-bit; arithmetic goes through 128-bit intermediates and
// a result that does not fit back into 64 bits throws domain_violation
// instead of wrapping.
class rat {
public:
    constexpr rat() : num_(0), den_(1) {}
    constexpr rat(std::int64_t n) : num_(n), den_(1) {}
    rat(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    // Largest integer <= *this.
    std::int64_t floor() const;
    rat abs() const { return num_ >= 0 ? *this : rat(-num_, den_); }

    friend rat operator+(const rat& a, const rat& b);
    friend rat operator-(const rat& a, const rat& b);
    friend rat operator*(const rat& a, const rat& b);
    friend rat operator/(const rat& a, const rat& b);
    friend rat operator-(const rat& a) { return rat(-a.num_, a.den_); }

    friend bool operator==(const rat&, const rat&) = default;
    friend std::strong_ordering operator<=>(const rat& a, const rat& b) {
        using i128 = __int128;
        i128 lhs = i128(a.num_) * b.den_;
        i128 rhs = i128(b.num_) * a.den_;
        return lhs < rhs ? std::strong_ordering::less
             : lhs > rhs ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
    }

    // Accepts "n" and "n/d" with optional sign.
    static rat parse(const std::string& text);
    // Prints "n" for integers, "n/d" otherwise.
    std::string str() const;

private:
    static rat from_i128(__int128 num, __int128 den);

    std::int64_t num_;
    std::int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const rat& q);

rat midpoint(const rat& a, const rat& b);

// 2^e as a rational; e may be negative.
rat pow2(int e);

// Open interval (lo, hi), lo < hi. Endpoints are part of the value; the
// point set it denotes is always the strict interior.
class interval {
public:
    interval(rat lo, rat hi) : lo_(lo), hi_(hi) {
        if (!(lo_ < hi_))
            throw domain_violation("interval endpoints out of order: " +
                                   lo_.str() + " .. " + hi_.str());
    }

    const rat& lo() const { return lo_; }
    const rat& hi() const { return hi_; }
    rat width() const { return hi_ - lo_; }
    rat mid() const { return midpoint(lo_, hi_); }

    bool contains(const rat& q) const { return lo_ < q && q < hi_; }
    // Containment as point sets (our intervals are open, so closed-endpoint
    // touching still counts as containment of the inner interval).
    bool contains(const interval& inner) const {
        return lo_ <= inner.lo_ && inner.hi_ <= hi_;
    }

    friend bool operator==(const interval&, const interval&) = default;

    std::string str() const { return "(" + lo_.str() + "," + hi_.str() + ")"; }

private:
    rat lo_;
    rat hi_;
};

std::ostream& operator<<(std::ostream& os, const interval& iv);

// Intersection of the open point sets, if non-empty.
std::optional<interval> intersect(const interval& a, const interval& b);

}  // namespace ramq
