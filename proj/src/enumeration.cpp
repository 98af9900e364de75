#include "ramq/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace ramq {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

std::int64_t triangle(std::int64_t s) { return s * (s + 1) / 2; }

// Total tree-path length; fits in u128 even for extreme 64-bit fractions.
u128 path_length(const std::vector<cw_run>& runs) {
    u128 total = 0;
    for (const cw_run& r : runs) total += u128(r.count);
    return total;
}

// Keys larger than this are almost certainly a bug upstream; refuse rather
// than allocate gigabytes.
constexpr u128 kMaxKeyBits = u128(1) << 24;

}  // namespace

std::int64_t pair_code(std::int64_t i, std::int64_t j) {
    if (i < 0 || j < 0) throw domain_violation("pair_code of negative value");
    i128 s = i128(i) + j;
    i128 code = s * (s + 1) / 2 + j;
    if (code > std::numeric_limits<std::int64_t>::max())
        throw domain_violation("pair_code overflow");
    return std::int64_t(code);
}

std::pair<std::int64_t, std::int64_t> unpair_code(std::int64_t m) {
    if (m < 0) throw domain_violation("unpair_code of negative value");
    std::int64_t s = std::int64_t((std::sqrt(8.0L * m + 1.0L) - 1.0L) / 2.0L);
    while (s > 0 && triangle(s) > m) --s;
    while (triangle(s + 1) <= m) ++s;
    std::int64_t j = m - triangle(s);
    return {s - j, j};
}

std::vector<cw_run> cw_runs(const rat& q) {
    if (q.sign() <= 0) throw domain_violation("cw_runs wants a positive rational");
    std::vector<cw_run> runs;
    std::int64_t a = q.num(), b = q.den();
    while (a != 1 || b != 1) {
        if (a > b) {
            if (b == 1) {
                runs.push_back({true, a - 1});
                a = 1;
            } else {
                runs.push_back({true, a / b});
                a %= b;
            }
        } else {
            if (a == 1) {
                runs.push_back({false, b - 1});
                b = 1;
            } else {
                runs.push_back({false, b / a});
                b %= a;
            }
        }
    }
    std::reverse(runs.begin(), runs.end());
    return runs;
}

rat enum_q(std::int64_t n) {
    if (n < 0) throw domain_violation("enum_q of negative index");
    if (n == 0) return rat(0);
    bool positive = (n % 2) == 1;
    std::uint64_t node = std::uint64_t(positive ? (n + 1) / 2 : n / 2);
    int msb = 63;
    while (!(node >> msb & 1)) --msb;
    std::int64_t a = 1, b = 1;
    for (int bit = msb - 1; bit >= 0; --bit) {
        if (node >> bit & 1)
            a += b;
        else
            b += a;
    }
    return positive ? rat(a, b) : rat(-a, b);
}

std::int64_t enum_q_index(const rat& q) {
    if (q.is_zero()) return 0;
    std::vector<cw_run> runs = cw_runs(q.abs());
    u128 bits = path_length(runs) + 1;
    if (bits > 62) throw domain_violation("enum_q index does not fit: " + q.str());
    std::uint64_t node = 1;
    for (const cw_run& r : runs) {
        node <<= r.count;
        if (r.right) node |= (std::uint64_t(1) << r.count) - 1;
    }
    std::int64_t idx = q.sign() > 0 ? std::int64_t(2 * node - 1) : std::int64_t(2 * node);
    return idx;
}

bool enum_q_less(const rat& a, const rat& b) {
    if (a == b) return false;
    if (a.is_zero()) return true;
    if (b.is_zero()) return false;
    std::vector<cw_run> ra = cw_runs(a.abs());
    std::vector<cw_run> rb = cw_runs(b.abs());
    u128 la = path_length(ra), lb = path_length(rb);
    if (la != lb) return la < lb;
    // Equal node depth: the paths decide, first diverging step wins (a left
    // step is the smaller bit).
    std::size_t ia = 0, ib = 0;
    std::int64_t rem_a = ra.empty() ? 0 : ra[0].count;
    std::int64_t rem_b = rb.empty() ? 0 : rb[0].count;
    while (ia < ra.size() && ib < rb.size()) {
        if (ra[ia].right != rb[ib].right) return !ra[ia].right;
        std::int64_t step = std::min(rem_a, rem_b);
        rem_a -= step;
        rem_b -= step;
        if (rem_a == 0 && ++ia < ra.size()) rem_a = ra[ia].count;
        if (rem_b == 0 && ++ib < rb.size()) rem_b = rb[ib].count;
    }
    // Same node, so the values differ only in sign; positives come first.
    return a.sign() > 0;
}

interval enum_intervals(std::int64_t n) {
    if (n < 0) throw domain_violation("enum_intervals of negative index");
    static std::mutex mu;
    static std::vector<interval> cache;
    static std::int64_t next_code = 0;
    std::lock_guard<std::mutex> lock(mu);
    while (std::int64_t(cache.size()) <= n) {
        auto [i, j] = unpair_code(next_code++);
        rat lo = enum_q(i), hi = enum_q(j);
        if (lo < hi) cache.push_back(interval(lo, hi));
    }
    return cache[std::size_t(n)];
}

std::pair<rat, rat> enum_pairs_rep(std::int64_t n) {
    auto [repeat, m] = unpair_code(n);
    (void)repeat;
    interval iv = enum_intervals(m);
    return {iv.lo(), iv.hi()};
}

void big_uint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

void big_uint::set_bit(std::uint64_t pos) {
    std::size_t limb = std::size_t(pos / 64);
    if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
    limbs_[limb] |= std::uint64_t(1) << (pos % 64);
}

bool big_uint::get_bit(std::uint64_t pos) const {
    std::size_t limb = std::size_t(pos / 64);
    if (limb >= limbs_.size()) return false;
    return limbs_[limb] >> (pos % 64) & 1;
}

big_uint& big_uint::operator+=(const big_uint& other) {
    if (other.limbs_.size() > limbs_.size()) limbs_.resize(other.limbs_.size(), 0);
    unsigned char carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        u128 sum = u128(limbs_[i]) + (i < other.limbs_.size() ? other.limbs_[i] : 0) + carry;
        limbs_[i] = std::uint64_t(sum);
        carry = (unsigned char)(sum >> 64);
    }
    if (carry) limbs_.push_back(carry);
    return *this;
}

void big_uint::shift_left_one() {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t next = limbs_[i] >> 63;
        limbs_[i] = (limbs_[i] << 1) | carry;
        carry = next;
    }
    if (carry) limbs_.push_back(carry);
}

void big_uint::decrement() {
    if (limbs_.empty()) throw domain_violation("decrement of zero big_uint");
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        if (limbs_[i]-- != 0) break;
    }
    trim();
}

std::strong_ordering operator<=>(const big_uint& a, const big_uint& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? std::strong_ordering::less
                                                 : std::strong_ordering::greater;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i])
            return a.limbs_[i] < b.limbs_[i] ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

big_uint enum_q_index_big(const rat& q) {
    big_uint out;
    if (q.is_zero()) return out;
    std::vector<cw_run> runs = cw_runs(q.abs());
    u128 level = path_length(runs);
    if (level + 1 > kMaxKeyBits)
        throw domain_violation("enumeration key too large: " + q.str());
    std::uint64_t pos = std::uint64_t(level);
    out.set_bit(pos);
    for (const cw_run& r : runs) {
        if (r.right)
            for (std::int64_t k = 0; k < r.count; ++k) out.set_bit(pos - 1 - std::uint64_t(k));
        pos -= std::uint64_t(r.count);
    }
    // Node index to enum_q index: 2n-1 for positives, 2n for negatives.
    out.shift_left_one();
    if (q.sign() > 0) out.decrement();
    return out;
}

interval_order_key::interval_order_key(const interval& iv)
    : sum_(enum_q_index_big(iv.lo())), hi_index_(enum_q_index_big(iv.hi())) {
    sum_ += hi_index_;
}

bool interval_order_less(const interval& a, const interval& b) {
    return interval_order_key(a) < interval_order_key(b);
}

}  // namespace ramq
