#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ramq/rat.hpp"

namespace ramq {

// Cantor pairing (i+j)(i+j+1)/2 + j and its inverse; the one pairing
// convention used everywhere codes travel through naturals.
std::int64_t pair_code(std::int64_t i, std::int64_t j);
std::pair<std::int64_t, std::int64_t> unpair_code(std::int64_t m);

// Canonical enumeration of all of Q: index 0 is 0, odd indices walk the
// Calkin-Wilf tree of positive rationals in breadth-first order, even
// indices their negatives.
rat enum_q(std::int64_t n);

// Index of q in enum_q. Throws domain_violation when the index does not fit
// into 63 bits (deep rationals); use enum_q_less for comparisons instead.
std::int64_t enum_q_index(const rat& q);

// enum_q_index(a) < enum_q_index(b), computed from the tree paths without
// materializing the indices.
bool enum_q_less(const rat& a, const rat& b);

// Canonical enumeration of open intervals: decode candidate pairs of enum_q
// indices in pair_code order and keep those with lo < hi. Bijective onto
// intervals; memoized internally (thread-safe).
interval enum_intervals(std::int64_t n);

// Enumeration of ordered pairs lo < hi in which every pair appears
// infinitely often: the index is unpaired and only its second half picks
// the interval.
std::pair<rat, rat> enum_pairs_rep(std::int64_t n);

// Run-length encoded Calkin-Wilf tree path of a positive rational, from the
// root. right=true runs increase the numerator.
struct cw_run {
    bool right;
    std::int64_t count;
    friend bool operator==(const cw_run&, const cw_run&) = default;
};
std::vector<cw_run> cw_runs(const rat& q);

// Little-endian multi-limb natural, just big enough for enumeration-order
// keys (node indices can have as many bits as the path is long).
class big_uint {
public:
    big_uint() = default;

    bool is_zero() const { return limbs_.empty(); }
    void set_bit(std::uint64_t pos);
    bool get_bit(std::uint64_t pos) const;

    big_uint& operator+=(const big_uint& other);
    // Doubles the value.
    void shift_left_one();
    // Subtracts one; value must be positive.
    void decrement();

    friend std::strong_ordering operator<=>(const big_uint& a, const big_uint& b);
    friend bool operator==(const big_uint&, const big_uint&) = default;

private:
    void trim();
    std::vector<std::uint64_t> limbs_;
};

// Index of q in enum_q as an exact big natural.
big_uint enum_q_index_big(const rat& q);

// Position of an interval in enum_intervals, comparable without computing
// the position itself: lexicographic on (i+j, j) for endpoint indices i, j.
class interval_order_key {
public:
    explicit interval_order_key(const interval& iv);

    friend bool operator<(const interval_order_key& a, const interval_order_key& b) {
        if (a.sum_ != b.sum_) return a.sum_ < b.sum_;
        return a.hi_index_ < b.hi_index_;
    }
    friend bool operator==(const interval_order_key&, const interval_order_key&) = default;

private:
    big_uint sum_;
    big_uint hi_index_;
};

bool interval_order_less(const interval& a, const interval& b);

}  // namespace ramq
