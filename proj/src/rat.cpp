#include "ramq/rat.hpp"

#include <cstdlib>
#include <limits>
#include <ostream>

namespace ramq {

namespace {

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();
constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();

}  // namespace

rat rat::from_i128(i128 num, i128 den) {
    if (den == 0) throw domain_violation("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) return rat();
    i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    if (num < kMin64 || num > kMax64 || den > kMax64)
        throw domain_violation("rational overflow");
    rat q;
    q.num_ = static_cast<std::int64_t>(num);
    q.den_ = static_cast<std::int64_t>(den);
    return q;
}

rat::rat(std::int64_t num, std::int64_t den) {
    rat q = from_i128(num, den);
    num_ = q.num_;
    den_ = q.den_;
}

std::int64_t rat::floor() const {
    if (num_ >= 0) return num_ / den_;
    return -((-num_ + den_ - 1) / den_);
}

rat operator+(const rat& a, const rat& b) {
    return rat::from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                          i128(a.den_) * b.den_);
}

rat operator-(const rat& a, const rat& b) {
    return rat::from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                          i128(a.den_) * b.den_);
}

rat operator*(const rat& a, const rat& b) {
    return rat::from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

rat operator/(const rat& a, const rat& b) {
    if (b.num_ == 0) throw domain_violation("rational division by zero");
    return rat::from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

rat rat::parse(const std::string& text) {
    std::size_t slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            std::int64_t n = std::stoll(text, &used);
            if (used != text.size()) throw parse_error("bad rational: " + text);
            return rat(n);
        }
        std::int64_t n = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw parse_error("bad rational: " + text);
        std::string den_part = text.substr(slash + 1);
        std::int64_t d = std::stoll(den_part, &used);
        if (used != den_part.size() || d <= 0)
            throw parse_error("bad rational: " + text);
        return rat(n, d);
    } catch (const std::invalid_argument&) {
        throw parse_error("bad rational: " + text);
    } catch (const std::out_of_range&) {
        throw parse_error("rational out of range: " + text);
    }
}

std::string rat::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const rat& q) {
    return os << q.str();
}

rat midpoint(const rat& a, const rat& b) { return (a + b) / rat(2); }

rat pow2(int e) {
    if (e < -62 || e > 62) throw domain_violation("pow2 exponent out of range");
    std::int64_t v = std::int64_t(1) << (e < 0 ? -e : e);
    return e >= 0 ? rat(v) : rat(1, v);
}

std::ostream& operator<<(std::ostream& os, const interval& iv) {
    return os << iv.str();
}

std::optional<interval> intersect(const interval& a, const interval& b) {
    rat lo = std::max(a.lo(), b.lo());
    rat hi = std::min(a.hi(), b.hi());
    if (lo < hi) return interval(lo, hi);
    return std::nullopt;
}

}  // namespace ramq
