#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ramq/poset.hpp"
#include "ramq/qcolouring.hpp"
#include "ramq/semigroup.hpp"

namespace ramq {

class additive_q_colouring;
class ordered_q_colouring;

// Pair colouring c(x, y) = h({f(z) : x <= z < y}) where h maps occurrence
// sets, encoded as bitmask subsets under union, into the target semigroup.
struct occ_hom_builder {
    q_colouring points;
    semigroup_hom hom;
};

// Pair colouring c(x, y) = f(x) over the left-zero semigroup on f's
// alphabet, where every product keeps its left factor.
struct left_zero_builder {
    q_colouring points;
};

struct additive_product_builder {
    std::shared_ptr<const additive_q_colouring> left;
    std::shared_ptr<const additive_q_colouring> right;
};

using additive_builder =
    std::variant<occ_hom_builder, left_zero_builder, additive_product_builder>;

// A colouring of rational pairs with values in a finite semigroup,
// satisfying c(x, z) = c(x, y) * c(y, z) for x < y < z.  Built from one of
// the closed builder families above; the builder is kept alongside the
// semigroup because the pair oracles work by structural recursion on it.
class additive_q_colouring {
  public:
    static additive_q_colouring occ_hom(q_colouring points, semigroup_hom hom);
    static additive_q_colouring left_zero_lift(q_colouring points);
    static additive_q_colouring product(additive_q_colouring left,
                                        additive_q_colouring right);

    const finite_semigroup& semigroup() const { return semigroup_; }
    const additive_builder& builder() const { return builder_; }

    // Bounded domain, if any component has one.  Components with bounded
    // ambients must agree exactly.
    const std::optional<interval>& ambient() const { return ambient_; }

    // c(x, y).  Throws order_violation unless x < y and point_outside_ambient
    // when the half-open segment leaves the ambient.
    int eval(const rat& x, const rat& y) const;

  private:
    additive_q_colouring(finite_semigroup s, std::optional<interval> ambient,
                         additive_builder b);

    finite_semigroup semigroup_;
    std::optional<interval> ambient_;
    additive_builder builder_;
};

// Pair colouring g(h) where h is the largest clamped depth with
// |x - y| < 2^-h.  The word must be antitone with a constant cycle, so wide
// pairs read early letters and narrow pairs settle on the cycle letter.
struct scale_builder {
    nword word;
};

// An additive colouring followed by the projection onto J-classes, ordered
// dually to the ideal preorder so that widening a pair can only move the
// colour upward.
struct j_proj_builder {
    std::shared_ptr<const additive_q_colouring> base;
    std::vector<int> classes;
};

struct ordered_product_builder {
    std::shared_ptr<const ordered_q_colouring> left;
    std::shared_ptr<const ordered_q_colouring> right;
};

using ordered_builder =
    std::variant<scale_builder, j_proj_builder, ordered_product_builder>;

// A colouring of rational pairs with values in a finite poset, satisfying
// c(x, y) <= c(x', y') whenever x' <= x < y <= y'.
class ordered_q_colouring {
  public:
    static ordered_q_colouring scale(nword word, finite_poset p);
    static ordered_q_colouring j_proj(additive_q_colouring base);
    static ordered_q_colouring product(ordered_q_colouring left,
                                       ordered_q_colouring right);

    const finite_poset& poset() const { return poset_; }
    const ordered_builder& builder() const { return builder_; }
    const std::optional<interval>& ambient() const { return ambient_; }

    int eval(const rat& x, const rat& y) const;

  private:
    ordered_q_colouring(finite_poset p, std::optional<interval> ambient,
                        ordered_builder b);

    finite_poset poset_;
    std::optional<interval> ambient_;
    ordered_builder builder_;
};

// Pair colouring of naturals c(m, n) = w(m) * ... * w(n - 1).
struct additive_n_colouring {
    finite_semigroup semigroup;
    nword word;

    additive_n_colouring(finite_semigroup s, nword w);
};

// Pair colouring of naturals c(m, n) = mono(letters of w on [m, n)), where
// mono maps bitmask subsets of the alphabet monotonically into the poset.
struct ordered_n_colouring {
    nword word;
    finite_poset poset;
    std::vector<int> mono;

    ordered_n_colouring(nword w, finite_poset p, std::vector<int> m);
};

using n_pair_colouring = std::variant<additive_n_colouring, ordered_n_colouring>;

// c(x, y) for the respective structure; the N forms take 0 <= m < n.
int eval_pair(const additive_q_colouring& c, const rat& x, const rat& y);
int eval_pair(const ordered_q_colouring& c, const rat& x, const rat& y);
int eval_pair(const n_pair_colouring& c, std::int64_t m, std::int64_t n);

// Checks the defining law (additivity, respectively order-compatibility) on
// deterministically sampled point tuples; throws law_violated with a witness
// on failure.  A failure indicates a bug in a builder, not bad input data.
void validate_structure(const additive_q_colouring& c, int samples);
void validate_structure(const ordered_q_colouring& c, int samples);
void validate_structure(const n_pair_colouring& c, int samples);

// The one colour taken by every pair inside the window, when the window is
// pair-homogeneous; decided exactly from the builder's finite data.
std::optional<int> is_pair_homogeneous(const ordered_q_colouring& c,
                                       const interval& window);

struct ordered_answer {
    interval window;
    int value = 0;

    bool operator==(const ordered_answer&) const = default;
};

// A window that is pair-homogeneous for a minimal realized colour.  Scale
// colourings shrink below the stabilisation depth of the word; projections
// search the shuffle gaps of the cell decomposition; products refine the
// left witness through the right component.
ordered_answer ort_q_oracle(const ordered_q_colouring& c);

// The one-point trace colouring z |-> (c(u, z), c(z, v)) on (u, v), encoded
// through pair_colour over the semigroup.  Piecewise constant between the
// breakpoints, sporadic fractions and exceptional points of an occurrence
// builder; a relabelling of the point colouring for a left-zero lift;
// componentwise for products.  Throws builder_not_closed when components
// cannot be fused.
q_colouring derive_gamma(const additive_q_colouring& c, const rat& u, const rat& v);

// One block of a dense homogeneous decomposition: the rationals of the
// window whose trace colour is (left, right), described by an indicator
// colouring, all of whose pairs get the idempotent `value`.
struct homogeneous_part {
    int left = 0;
    int right = 0;
    int value = 0;
    q_colouring region;
};

struct dense_homogeneous_answer {
    interval window;
    std::vector<homogeneous_part> parts;
    // The common part value when all parts agree on one idempotent.
    std::optional<int> colour;
    std::set<int> colours;
};

// Splits a subwindow of the ambient into finitely many dense parts on which
// the pair colouring is constant with idempotent value: first a window with
// constant J-class, then the trace colouring, then its shuffle window.
// Verifies the decomposition and throws verification_failed on mismatch.
dense_homogeneous_answer art_q_oracle(const additive_q_colouring& c);

// First index from which every position of the word carries a recurring
// letter, together with the recurring letters themselves.
struct n_recurring_structure {
    std::int64_t start = 0;
    colour_set letters;
};

n_recurring_structure recurring_structure(const n_pair_colouring& c);

struct n_homogeneous_set {
    std::int64_t base = 0;
    std::int64_t stride = 1;
    int value = 0;
};

// An arithmetic progression past the prefix on which every pair takes one
// colour: the idempotent power of the cycle product for additive words, the
// image of the cycle letter set for ordered ones.
n_homogeneous_set homogeneous_oracle(const n_pair_colouring& c);

std::string additive_colouring_to_json(const additive_q_colouring& c);
additive_q_colouring additive_colouring_from_json(const std::string& text);
std::string ordered_colouring_to_json(const ordered_q_colouring& c);
ordered_q_colouring ordered_colouring_from_json(const std::string& text);
std::string n_pair_colouring_to_json(const n_pair_colouring& c);
n_pair_colouring n_pair_colouring_from_json(const std::string& text);
std::string homogeneous_answer_to_json(const dense_homogeneous_answer& a);

}  // namespace ramq
