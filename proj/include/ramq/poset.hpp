#pragma once

#include <utility>
#include <vector>

#include "ramq/errors.hpp"
#include "ramq/semigroup.hpp"

namespace ramq {

// Finite partial order on 0..size-1, stored as the full relation matrix.
class finite_poset {
public:
    explicit finite_poset(std::vector<std::vector<bool>> leq);

    int size() const { return int(leq_.size()); }
    bool leq(int a, int b) const { return leq_[std::size_t(a)][std::size_t(b)]; }
    bool strictly_less(int a, int b) const { return a != b && leq(a, b); }
    const std::vector<std::vector<bool>>& matrix() const { return leq_; }

    // Topological order refining leq; among the available elements the
    // smallest index goes first.
    std::vector<int> linear_extension() const;
    std::vector<int> minimal_elements() const;

    friend bool operator==(const finite_poset&, const finite_poset&) = default;

private:
    std::vector<std::vector<bool>> leq_;
};

finite_poset antichain(int n);
// chain(order) where order[i] gives the i-th smallest element.
finite_poset chain_poset(const std::vector<int>& order);
// Subsets of 0..k-1 as bitmasks; reverse=false orders by inclusion,
// reverse=true by reverse inclusion.
finite_poset subset_poset(int k, bool reverse);
finite_poset dual(const finite_poset& p);
// Componentwise order on pairs; (a, x) encoded as a * p2.size() + x.
finite_poset product(const finite_poset& p1, const finite_poset& p2);

// Quotient of a semigroup by J-equivalence, ordered by the J-preorder,
// with the projection element -> class index.
std::pair<finite_poset, std::vector<int>> j_order_poset(const finite_semigroup& s);

}  // namespace ramq
