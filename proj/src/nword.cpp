#include "ramq/nword.hpp"

#include <algorithm>
#include <numeric>

namespace ramq {

nword::nword(int alphabet, std::vector<colour> prefix, std::vector<colour> cycle)
    : alphabet_(alphabet), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    if (alphabet_ <= 0) throw bad_entry("nword alphabet must be positive");
    if (cycle_.empty()) throw bad_entry("nword cycle must be non-empty");
    for (colour c : prefix_)
        if (c < 0 || c >= alphabet_) throw bad_entry("nword prefix letter out of range");
    for (colour c : cycle_) {
        if (c < 0 || c >= alphabet_) throw bad_entry("nword cycle letter out of range");
        recurring_.insert(c);
    }
}

colour nword::at(std::int64_t n) const {
    if (n < 0) throw domain_violation("nword indexed at negative position");
    if (n < std::int64_t(prefix_.size())) return prefix_[std::size_t(n)];
    return cycle_[std::size_t((n - prefix_.size()) % cycle_.size())];
}

colour_set nword::occurring() const {
    colour_set out = recurring_;
    out.insert(prefix_.begin(), prefix_.end());
    return out;
}

bool nword::occurs(colour c) const {
    if (recurring_.count(c)) return true;
    return std::find(prefix_.begin(), prefix_.end(), c) != prefix_.end();
}

std::int64_t nword::ect_bound() const {
    std::int64_t b = 0;
    for (std::size_t i = 0; i < prefix_.size(); ++i)
        if (!recurring_.count(prefix_[i])) b = std::int64_t(i);
    return b;
}

std::int64_t nword::last_occurrence_upto(colour c, std::int64_t bound) const {
    if (bound < 0) return -1;
    // A recurring occurrence repeats within one cycle length of the bound,
    // so a prefix+cycle window below the bound finds it; all that can hide
    // below the window is the prefix.
    std::int64_t window = std::int64_t(prefix_.size() + cycle_.size());
    std::int64_t from = std::max<std::int64_t>(0, bound - window);
    for (std::int64_t n = bound; n >= from; --n)
        if (at(n) == c) return n;
    for (std::int64_t n = std::min<std::int64_t>(bound, std::int64_t(prefix_.size()) - 1);
         n >= 0; --n)
        if (prefix_[std::size_t(n)] == c) return n;
    return -1;
}

std::int64_t nword::first_occurrence(colour c) const {
    for (std::size_t i = 0; i < prefix_.size(); ++i)
        if (prefix_[i] == c) return std::int64_t(i);
    for (std::size_t i = 0; i < cycle_.size(); ++i)
        if (cycle_[i] == c) return std::int64_t(prefix_.size() + i);
    return -1;
}

nword nword::zip(const nword& a, const nword& b, int out_alphabet,
                 const std::function<colour(colour, colour)>& f) {
    std::size_t prefix_len = std::max(a.prefix_.size(), b.prefix_.size());
    std::size_t cycle_len = std::lcm(a.cycle_.size(), b.cycle_.size());
    std::vector<colour> prefix, cycle;
    prefix.reserve(prefix_len);
    cycle.reserve(cycle_len);
    for (std::size_t n = 0; n < prefix_len; ++n)
        prefix.push_back(f(a.at(std::int64_t(n)), b.at(std::int64_t(n))));
    for (std::size_t i = 0; i < cycle_len; ++i)
        cycle.push_back(f(a.at(std::int64_t(prefix_len + i)),
                          b.at(std::int64_t(prefix_len + i))));
    return nword(out_alphabet, std::move(prefix), std::move(cycle));
}

nword nword::relabel(int out_alphabet, const std::vector<colour>& map) const {
    if (std::int64_t(map.size()) < alphabet_)
        throw bad_entry("relabel map smaller than alphabet");
    auto apply = [&](colour c) {
        colour out = map[std::size_t(c)];
        if (out < 0 || out >= out_alphabet)
            throw bad_entry("relabel target letter out of range");
        return out;
    };
    std::vector<colour> prefix, cycle;
    prefix.reserve(prefix_.size());
    cycle.reserve(cycle_.size());
    for (colour c : prefix_) prefix.push_back(apply(c));
    for (colour c : cycle_) cycle.push_back(apply(c));
    return nword(out_alphabet, std::move(prefix), std::move(cycle));
}

std::string nword::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(prefix_[i]);
    }
    out += " |";
    for (std::size_t i = 0; i < cycle_.size(); ++i) {
        out += i ? "," : " ";
        out += std::to_string(cycle_[i]);
    }
    return out + "]";
}

}  // namespace ramq
