#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ramq/colour.hpp"
#include "ramq/errors.hpp"

namespace ramq {

// Eventually periodic word over the alphabet 0..k-1: a finite prefix
// followed by a non-empty cycle repeated forever. This is the finite
// presentation of every infinite sequence the library consumes.
class nword {
public:
    nword(int alphabet, std::vector<colour> prefix, std::vector<colour> cycle);

    int alphabet() const { return alphabet_; }
    const std::vector<colour>& prefix() const { return prefix_; }
    const std::vector<colour>& cycle() const { return cycle_; }

    colour at(std::int64_t n) const;

    // Letters occurring infinitely often, i.e. the cycle letters.
    const colour_set& recurring() const { return recurring_; }
    // Letters occurring at all.
    colour_set occurring() const;
    bool occurs(colour c) const;

    // Least b such that every value at a position > b recurs. Non-recurring
    // letters live only in the prefix, so this is the last prefix position
    // holding one (or 0 when there is none).
    std::int64_t ect_bound() const;

    // Largest position <= bound where letter c occurs, or -1.
    std::int64_t last_occurrence_upto(colour c, std::int64_t bound) const;
    // Least position where c occurs, or -1.
    std::int64_t first_occurrence(colour c) const;

    // Pointwise combination; the result's prefix/cycle shape is the join of
    // the operands' shapes.
    static nword zip(const nword& a, const nword& b, int out_alphabet,
                     const std::function<colour(colour, colour)>& f);

    nword relabel(int out_alphabet, const std::vector<colour>& map) const;

    friend bool operator==(const nword&, const nword&) = default;

    std::string str() const;

private:
    int alphabet_;
    std::vector<colour> prefix_;
    std::vector<colour> cycle_;
    colour_set recurring_;
};

}  // namespace ramq
