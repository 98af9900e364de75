#pragma once

#include <string>
#include <vector>

#include "ramq/errors.hpp"

namespace ramq {

// Finite semigroup on elements 0..size-1 given by its multiplication table.
// Associativity is checked at construction by brute force.
class finite_semigroup {
public:
    explicit finite_semigroup(std::vector<std::vector<int>> table);

    int size() const { return int(table_.size()); }
    int mul(int a, int b) const { return table_[std::size_t(a)][std::size_t(b)]; }
    // s^n for n >= 1.
    int pow(int s, long long n) const;
    const std::vector<std::vector<int>>& table() const { return table_; }

    friend bool operator==(const finite_semigroup&, const finite_semigroup&) = default;

private:
    std::vector<std::vector<int>> table_;
};

finite_semigroup left_zero(int n);
finite_semigroup powerset_union(int k);  // elements are bitmask subsets of 0..k-1
finite_semigroup cyclic(int n);
// Componentwise product; element (a, x) is encoded as a * s2.size() + x.
finite_semigroup product(const finite_semigroup& s1, const finite_semigroup& s2);

// A partition of 0..n-1 into classes, numbered by first appearance.
struct partition {
    std::vector<int> class_of;
    std::vector<std::vector<int>> members;
};

partition partition_from_equiv(int n, const std::vector<std::vector<bool>>& equiv);

// The four Green preorders and their class partitions, plus the least
// exponent making every power idempotent.
struct green_data {
    std::vector<std::vector<bool>> leq_r, leq_l, leq_j, leq_h;
    partition classes_r, classes_l, classes_j, classes_h;
    int idem_exponent = 1;
    std::vector<int> omega_power;

    bool r_equiv(int a, int b) const { return classes_r.class_of[a] == classes_r.class_of[b]; }
    bool l_equiv(int a, int b) const { return classes_l.class_of[a] == classes_l.class_of[b]; }
    bool j_equiv(int a, int b) const { return classes_j.class_of[a] == classes_j.class_of[b]; }
    bool h_equiv(int a, int b) const { return classes_h.class_of[a] == classes_h.class_of[b]; }
};

green_data green_structure(const finite_semigroup& s);

// One failed instance of a law that should hold in every finite semigroup.
struct green_violation {
    std::string law;
    std::string detail;
};

// Exhaustive check of three structural facts: an H-class closed under one
// product is a group; below-R plus J-equivalent implies R-equivalent;
// below-L plus R-equivalent implies H-equivalent. Any entry in the report
// is a bug in green_structure or in the caller's table.
std::vector<green_violation> check_green_lemmas(const finite_semigroup& s);

struct semigroup_hom {
    finite_semigroup source;
    finite_semigroup target;
    std::vector<int> map;
};

int apply_hom(const semigroup_hom& h, int s);
// Throws not_homomorphism with a witnessing pair.
void validate_hom(const semigroup_hom& h);

}  // namespace ramq
