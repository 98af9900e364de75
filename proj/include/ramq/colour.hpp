#pragma once

#include <set>
#include <string>

namespace ramq {

// Colours (and semigroup elements, poset elements, ...) are dense integer
// indices starting at 0. Alphabets stay small, so plain ordered sets are
// the right tool for the frequent unions/intersections.
using colour = int;
using colour_set = std::set<colour>;

inline colour_set set_union(const colour_set& a, const colour_set& b) {
    colour_set out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline colour_set set_intersect(const colour_set& a, const colour_set& b) {
    colour_set out;
    for (colour c : a)
        if (b.count(c)) out.insert(c);
    return out;
}

inline bool subset_of(const colour_set& a, const colour_set& b) {
    for (colour c : a)
        if (!b.count(c)) return false;
    return true;
}

inline std::string set_str(const colour_set& s) {
    std::string out = "{";
    bool first = true;
    for (colour c : s) {
        if (!first) out += ",";
        out += std::to_string(c);
        first = false;
    }
    return out + "}";
}

}  // namespace ramq
