#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ramq/colour.hpp"
#include "ramq/nword.hpp"
#include "ramq/rat.hpp"

namespace ramq {

// Finitely presented colourings of the rationals.
//
// A colouring is a bounded or unbounded ambient interval cut at finitely many
// breakpoints into open cells, one generator per cell, plus finitely many
// exceptional points that override whatever the generator says.  Everything a
// query returns (values, occurring sets, dense sets) is computed exactly from
// this presentation, never by sampling.

// Every point of the cell gets the same colour.
struct constant_gen {
    colour value = 0;

    bool operator==(const constant_gen&) const = default;
};

// The colour of a point depends only on its reduced denominator: a/b in
// lowest terms gets word.at(b).  Position 0 of the word is never consulted.
struct denominator_gen {
    nword word;

    bool operator==(const denominator_gen&) const = default;
};

// Parity-of-binary-digit colouring with one digit position per letter of a
// scheduling word.  A point a/b in lowest terms is coloured in two steps.
// First each letter j of the schedule is assigned a stripe depth
//
//     m_j(b) = 1 + (last position <= horizon(b) where the schedule shows j)
//
// or 0 when j has not shown up that early, where horizon(b) grows like
// log2(b).  Then the point's pattern collects the binary digits of a/b at
// those depths, bit j set when floor((a/b) * 2^{m_j(b)}) is odd, and the
// table maps the pattern to the final colour.
//
// Letters the schedule repeats forever get deeper and deeper stripes, so
// every pattern consistent with the finitely many frozen stripes is realised
// densely; letters mentioned only finitely often freeze at a fixed depth.
struct dyadic_parity_gen {
    // Alphabet size k of the schedule is the pattern width; at most 16.
    nword schedule;
    // Maps each k-bit pattern (bit j = digit at j's stripe depth) to a
    // colour; size must be exactly 2^k.
    std::vector<colour> table;

    bool operator==(const dyadic_parity_gen&) const = default;
};

using generator = std::variant<constant_gen, denominator_gen, dyadic_parity_gen>;

// A single point whose colour overrides the cell generator.
struct exceptional_point {
    rat point;
    colour value = 0;

    bool operator==(const exceptional_point&) const = default;
};

// One cell of a decomposition, clipped to the queried window.
struct cell_view {
    interval span;
    // Index into the owning colouring's generator list.
    std::size_t gen_index = 0;
    colour_set dense;
    std::vector<exceptional_point> points;
};

struct cell_decomposition {
    std::vector<cell_view> views;
    // Breakpoints interior to the queried window, with their colours.
    std::vector<exceptional_point> boundaries;
};

class q_colouring {
  public:
    // `ambient` empty means the whole line.  Breakpoints must be strictly
    // increasing and interior to the ambient; `cells` holds one generator
    // per gap, so cells.size() == breakpoints.size() + 1.  Exceptional
    // points must be interior, distinct, and must not touch any cell whose
    // generator is a dyadic_parity_gen (those cells answer exact occurrence
    // queries by cell arithmetic that admits no overrides).
    q_colouring(int alphabet, std::optional<interval> ambient,
                std::vector<rat> breakpoints, std::vector<generator> cells,
                std::vector<exceptional_point> exceptional);

    // Single-cell convenience.
    static q_colouring single_cell(int alphabet, generator gen,
                                   std::optional<interval> ambient = {},
                                   std::vector<exceptional_point> exceptional = {});

    int alphabet() const { return alphabet_; }
    const std::optional<interval>& ambient() const { return ambient_; }
    const std::vector<rat>& breakpoints() const { return breakpoints_; }
    const std::vector<generator>& cell_generators() const { return cells_; }
    const std::vector<exceptional_point>& exceptional() const { return exceptional_; }

    // Colour of a point.  Throws point_outside_ambient off the ambient.
    colour at(const rat& q) const;

    // Exact set of colours taken somewhere in I.  I must be a subinterval
    // of the ambient.  Cells driven by a dyadic_parity_gen answer this only
    // for windows with dyadic endpoints of scale <= 12 (denominator a power
    // of two up to 4096) and throw unsupported_query beyond that; every
    // other generator answers for arbitrary rational windows.
    colour_set occurring(const interval& window) const;

    // Exact set of colours dense in I, for arbitrary rational windows.
    colour_set dense(const interval& window) const;

    // Dense-in-every-subinterval check: occurring(I) == dense(I).
    // Subject to the same exactness domain as occurring().
    bool is_shuffle(const interval& window) const;

    // Cells and boundary points of the window, each cell clipped and
    // annotated with its dense set and interior exceptional points.
    cell_decomposition cells(const interval& window) const;

    // Pointwise relabelling: colour v becomes map[v].  `map` must have one
    // entry per alphabet letter, each below out_alphabet.
    q_colouring relabel(int out_alphabet, const std::vector<colour>& map) const;

    // Same colouring on a smaller ambient.
    q_colouring restrict(const interval& window) const;

    bool operator==(const q_colouring&) const = default;

  private:
    int alphabet_;
    std::optional<interval> ambient_;
    std::vector<rat> breakpoints_;
    std::vector<generator> cells_;
    std::vector<exceptional_point> exceptional_;
};

// Product colouring: point q gets a.at(q) * b.alphabet() + b.at(q), fused
// back into a single presentation on the merged breakpoints.  Requires equal
// ambients.  Cell pairs that cannot be fused exactly (a dyadic_parity_gen
// against anything but a constant) throw pair_unsupported.
q_colouring pair_colouring(const q_colouring& a, const q_colouring& b);

colour pair_colour(colour left, colour right, int right_alphabet);
std::pair<colour, colour> unpair_colour(colour pair, int right_alphabet);

struct shuffle_answer {
    interval window;
    colour_set colours;

    bool operator==(const shuffle_answer&) const = default;
};

// A subinterval of the ambient on which the colouring is a shuffle, chosen
// to make the occurring set as small as possible; among the minimisers the
// window earliest in interval enumeration order wins.  Exact, and therefore
// unavailable (unsupported_query) when any cell is a dyadic_parity_gen.
shuffle_answer shuffle_oracle(const q_colouring& c);

// First rational in canonical enumeration order that lies in the window
// (and the ambient) and has colour v, scanning at most `budget` candidates.
std::optional<rat> find_point(const q_colouring& c, const interval& window,
                              colour v, std::int64_t budget);

// Colour of the enumeration-first rational inside the window.
colour first_colour_in(const q_colouring& c, const interval& window);

// Binary digit t of q: floor(q * 2^t) mod 2.  Exact for 0 <= t <= 62.
int binary_digit(const rat& q, int t);

// Schedule positions a dyadic_parity_gen reads before colouring points of
// the given reduced denominator: floor(log2 b) - 3, floored at -1.
std::int64_t dyadic_horizon(std::int64_t denominator);

// Stripe depth per letter at the given denominator (see dyadic_parity_gen).
std::vector<int> dyadic_depths(const nword& schedule, std::int64_t denominator);

// JSON presentations.  Parsing accepts, besides the three generator kinds,
// {"kind":"pair", "left":..., "right":...} at colouring level, which is
// fused via pair_colouring on the spot.
std::string nword_to_json(const nword& w);
nword nword_from_json(const std::string& text);
std::string q_colouring_to_json(const q_colouring& c);
q_colouring q_colouring_from_json(const std::string& text);
std::string shuffle_answer_to_json(const shuffle_answer& a);

}  // namespace ramq
