#include "ramq/qcolouring.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "ramq/enumeration.hpp"

namespace ramq {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

i128 floordiv(i128 a, i128 b) {
    i128 q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

int parity(i128 v) { return static_cast<int>(((v % 2) + 2) % 2); }

i64 ceil_i64(const rat& q) { return q.is_integer() ? q.num() : q.floor() + 1; }

// floor(q * 2^t), with the caller promising t small enough that the shifted
// numerator stays inside 128 bits. Results are capped so that downstream
// cell indices fit comfortably under the bit-surgery offset.
i64 scaled_floor(const rat& q, int t, bool* exact = nullptr) {
    if (t < 0 || t > 60) throw unsupported_query("stripe depth out of range");
    i128 num = i128(q.num()) << t;
    i128 v = floordiv(num, q.den());
    if (exact) *exact = num % q.den() == 0;
    if (v > (i128(1) << 55) || v < -(i128(1) << 55))
        throw unsupported_query("window too wide for exact stripe arithmetic");
    return static_cast<i64>(v);
}

// Index of the depth-t cell holding points just above q; q itself may sit on
// the grid.
i64 scaled_floor_above(const rat& q, int t) { return scaled_floor(q, t); }

// Index of the depth-t cell holding points just below q.
i64 scaled_floor_below(const rat& q, int t) {
    bool exact = false;
    i64 v = scaled_floor(q, t, &exact);
    return exact ? v - 1 : v;
}

bool on_grid(const rat& q, int t) {
    bool exact = false;
    scaled_floor(q, t, &exact);
    return exact;
}

rat grid_rat(i64 m, int t) { return rat(m, i64(1) << t); }

// Smallest m in [mlo, mhi] whose binary digits satisfy every (position, bit)
// constraint, if any. Values are offset to be positive so shifts are clean;
// the offset sits far above every constrained position. Each repair either
// finishes on the next scan or strictly raises the highest violated
// position, so the loop terminates well inside the guard.
bool find_cell(i64 mlo, i64 mhi, const std::vector<std::pair<int, int>>& bits) {
    if (mlo > mhi) return false;
    constexpr i64 off = i64(1) << 57;
    i64 m = mlo + off;
    const i64 top = mhi + off;
    for (int guard = 0; guard < 300; ++guard) {
        if (m > top) return false;
        int bad_pos = -1;
        int bad_val = 0;
        for (const auto& [pos, val] : bits)
            if (((m >> pos) & 1) != val && pos > bad_pos) {
                bad_pos = pos;
                bad_val = val;
            }
        if (bad_pos < 0) return true;
        if (bad_val == 1)
            m = ((m >> bad_pos) | 1) << bad_pos;
        else
            m = ((m >> (bad_pos + 1)) + 1) << (bad_pos + 1);
        for (const auto& [pos, val] : bits)
            if (pos < bad_pos && val == 1) m |= i64(1) << pos;
    }
    throw machine_fault("cell search failed to converge");
}

// Letters of a schedule whose stripe depth no longer moves: letters confined
// to the prefix freeze at one past their last prefix position, letters that
// never occur stay at depth 0.
struct frozen_info {
    std::vector<std::pair<colour, int>> letters;
    std::vector<colour> never;
};

frozen_info frozen_of(const nword& w) {
    frozen_info out;
    const i64 pref = static_cast<i64>(w.prefix().size());
    for (colour j = 0; j < w.alphabet(); ++j) {
        if (!w.occurs(j)) {
            out.never.push_back(j);
            continue;
        }
        if (w.recurring().count(j)) continue;
        out.letters.push_back({j, static_cast<int>(1 + w.last_occurrence_upto(j, pref - 1))});
    }
    return out;
}

int dyadic_pattern_at(const dyadic_parity_gen& g, const rat& q) {
    const std::vector<int> depths = dyadic_depths(g.schedule, q.den());
    int p = 0;
    for (std::size_t j = 0; j < depths.size(); ++j)
        p |= binary_digit(q, depths[j]) << j;
    return p;
}

// Colours dense in the window under a dyadic parity generator. A pattern is
// dense wherever its bits at the frozen stripes match the local digits, so
// the answer is the intersection, over the frozen-resolution cells meeting
// the window, of the table images of the compatible patterns.
colour_set dyadic_dense_set(const dyadic_parity_gen& g, const interval& win) {
    const nword& w = g.schedule;
    const int k = w.alphabet();
    const frozen_info fr = frozen_of(w);
    std::vector<int> depths;
    for (const auto& [j, d] : fr.letters) depths.push_back(d);
    if (!fr.never.empty()) depths.push_back(0);
    std::sort(depths.begin(), depths.end());
    depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
    if (depths.empty()) return colour_set(g.table.begin(), g.table.end());
    if (depths.size() > 12) throw unsupported_query("too many frozen stripes for exact density");
    const int res = depths.back();
    const i64 first = scaled_floor_above(win.lo(), res);
    const i64 last = scaled_floor_below(win.hi(), res);
    std::optional<colour_set> acc;
    for (int v = 0; v < (1 << depths.size()); ++v) {
        std::vector<std::pair<int, int>> bits;
        std::map<int, int> digit;
        for (std::size_t t = 0; t < depths.size(); ++t) {
            digit[depths[t]] = (v >> t) & 1;
            bits.push_back({res - depths[t], (v >> t) & 1});
        }
        if (!find_cell(first, last, bits)) continue;
        colour_set image;
        for (int p = 0; p < (1 << k); ++p) {
            bool ok = true;
            for (const auto& [j, d] : fr.letters)
                if (((p >> j) & 1) != digit[d]) {
                    ok = false;
                    break;
                }
            if (ok)
                for (colour j : fr.never)
                    if (((p >> j) & 1) != digit[0]) {
                        ok = false;
                        break;
                    }
            if (ok) image.insert(g.table[p]);
        }
        acc = acc ? set_intersect(*acc, image) : std::move(image);
        if (acc->empty()) break;
    }
    return acc ? *acc : colour_set{};
}

// Stripe constraints a pattern imposes per depth; letters sharing a stripe
// must agree or the pattern never occurs at this horizon.
std::optional<std::map<int, int>> pattern_stripes(const std::vector<int>& depths, int pattern) {
    std::map<int, int> out;
    for (std::size_t j = 0; j < depths.size(); ++j) {
        const int bit = (pattern >> j) & 1;
        auto [it, fresh] = out.emplace(depths[j], bit);
        if (!fresh && it->second != bit) return std::nullopt;
    }
    return out;
}

// Points with denominators below 8 read no schedule position at all; every
// stripe sits at depth 0 and the pattern is all-equal to the floor parity.
void scan_small(const dyadic_parity_gen& g, const interval& win, std::set<int>& pats) {
    const int full = (1 << g.schedule.alphabet()) - 1;
    for (i64 b = 1; b <= 7; ++b) {
        i128 a = floordiv(i128(win.lo().num()) * b, win.lo().den()) + 1;
        for (; a * win.hi().den() < i128(win.hi().num()) * b; ++a) {
            if (a > (i128(1) << 62) || a < -(i128(1) << 62))
                throw unsupported_query("window too wide for exact occurrence");
            const i64 av = static_cast<i64>(a);
            if (std::gcd(av < 0 ? -av : av, b) != 1) continue;
            pats.insert(parity(floordiv(av, b)) ? full : 0);
        }
    }
}

// Exhaustive scan of one horizon band over a region known to sit inside a
// single band cell, so the first reduced fraction there settles the region's
// pattern. Only ever called for coarse bands, where the band is small.
void scan_band(int e, const rat& lo, const rat& hi, const std::vector<int>& depths,
               std::set<int>& pats) {
    for (i64 b = i64(1) << e; b < (i64(1) << (e + 1)); ++b) {
        i128 a = floordiv(i128(lo.num()) * b, lo.den()) + 1;
        for (; a * hi.den() < i128(hi.num()) * b; ++a) {
            if (a > (i128(1) << 62) || a < -(i128(1) << 62))
                throw unsupported_query("window too wide for exact occurrence");
            const i64 av = static_cast<i64>(a);
            if (std::gcd(av < 0 ? -av : av, b) != 1) continue;
            const rat q(av, b);
            int p = 0;
            for (std::size_t j = 0; j < depths.size(); ++j)
                p |= binary_digit(q, depths[j]) << j;
            pats.insert(p);
            return;
        }
    }
}

// Denominator of a dyadic rational as a power of two, capped where exact
// occurrence queries stay tractable.
int dyadic_scale(const rat& q) {
    const i64 d = q.den();
    if ((d & (d - 1)) != 0)
        throw unsupported_query("exact occurrence on a dyadic parity cell needs dyadic window endpoints");
    const int s = std::bit_width(static_cast<std::uint64_t>(d)) - 1;
    if (s > 12)
        throw unsupported_query("exact occurrence on a dyadic parity cell needs endpoint scale at most 12");
    return s;
}

// Exact occurring set of a dyadic parity generator on a window with dyadic
// endpoints. Horizon bands are enumerated one by one: within a band the
// stripe depths are fixed, full band cells realize exactly the patterns
// whose stripe constraints some cell index satisfies (every full cell holds
// a reduced fraction of in-band denominator), and the leftover slivers at
// the window edges are scanned directly. Beyond the last enumerated band
// every stripe is either frozen or free, so only the frozen digits decide.
colour_set dyadic_occurring_set(const dyadic_parity_gen& g, const interval& win) {
    const int s = std::max(dyadic_scale(win.lo()), dyadic_scale(win.hi()));
    if (win.width() > rat(i64(1) << 20))
        throw unsupported_query("window too wide for exact occurrence");
    const nword& w = g.schedule;
    const int k = w.alphabet();
    const i64 shape = static_cast<i64>(w.prefix().size() + w.cycle().size());
    if (shape > 36) throw unsupported_query("schedule too long for exact occurrence");
    const int e_big = std::max(static_cast<int>(shape) + 4, s + 1);

    std::set<int> pats;
    scan_small(g, win, pats);

    for (int e = 3; e <= e_big; ++e) {
        const std::vector<int> depths = dyadic_depths(w, i64(1) << e);
        const int res = 1 + *std::max_element(depths.begin(), depths.end());
        const i64 first = -scaled_floor(-win.lo(), res);
        const i64 last = scaled_floor(win.hi(), res) - 1;
        for (int p = 0; p < (1 << k); ++p) {
            if (pats.count(p)) continue;
            const auto stripes = pattern_stripes(depths, p);
            if (!stripes) continue;
            std::vector<std::pair<int, int>> bits;
            for (const auto& [d, bit] : *stripes) bits.push_back({res - d, bit});
            if (find_cell(first, last, bits)) pats.insert(p);
        }
        const i64 above = scaled_floor_above(win.lo(), res);
        const i64 below = scaled_floor_below(win.hi(), res);
        if (above == below) {
            scan_band(e, win.lo(), win.hi(), depths, pats);
        } else {
            if (!on_grid(win.lo(), res))
                scan_band(e, win.lo(), grid_rat(above + 1, res), depths, pats);
            if (!on_grid(win.hi(), res))
                scan_band(e, grid_rat(below, res), win.hi(), depths, pats);
        }
    }

    const frozen_info fr = frozen_of(w);
    for (int p = 0; p < (1 << k); ++p) {
        if (pats.count(p)) continue;
        std::map<int, int> need;
        bool ok = true;
        for (const auto& [j, d] : fr.letters) need[d] = (p >> j) & 1;
        if (!fr.never.empty()) {
            const int nb = (p >> fr.never.front()) & 1;
            for (colour j : fr.never)
                if (((p >> j) & 1) != nb) {
                    ok = false;
                    break;
                }
            if (ok) need[0] = nb;
        }
        if (!ok) continue;
        if (need.empty()) {
            pats.insert(p);
            continue;
        }
        const int res = need.rbegin()->first;
        std::vector<std::pair<int, int>> bits;
        for (const auto& [d, bit] : need) bits.push_back({res - d, bit});
        const i64 first = -scaled_floor(-win.lo(), res);
        const i64 last = scaled_floor(win.hi(), res) - 1;
        if (find_cell(first, last, bits)) {
            pats.insert(p);
            continue;
        }
        const auto piece_matches = [&](auto digit_at) {
            for (const auto& [d, bit] : need)
                if (digit_at(d) != bit) return false;
            return true;
        };
        if (!on_grid(win.lo(), res) &&
            piece_matches([&](int d) { return parity(scaled_floor_above(win.lo(), d)); })) {
            pats.insert(p);
            continue;
        }
        if (!on_grid(win.hi(), res) &&
            piece_matches([&](int d) { return parity(scaled_floor_below(win.hi(), d)); }))
            pats.insert(p);
    }

    colour_set out;
    for (int p : pats) out.insert(g.table.at(static_cast<std::size_t>(p)));
    return out;
}

std::size_t cell_index_of(const std::vector<rat>& bps, const rat& q) {
    return static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), q) - bps.begin());
}

const exceptional_point* override_at(const std::vector<exceptional_point>& exc, const rat& q) {
    auto it = std::lower_bound(exc.begin(), exc.end(), q,
                               [](const exceptional_point& e, const rat& p) { return e.point < p; });
    return it != exc.end() && it->point == q ? &*it : nullptr;
}

struct portion {
    interval span;
    std::size_t index;
};

// The window cut at the interior breakpoints, each piece tagged with its
// cell index.
std::vector<portion> portions_of(const q_colouring& c, const interval& win) {
    if (c.ambient() && !c.ambient()->contains(win))
        throw point_outside_ambient("window " + win.str() + " outside the ambient");
    const auto& bps = c.breakpoints();
    std::vector<portion> out;
    std::size_t i = cell_index_of(bps, win.lo());
    rat lo = win.lo();
    for (; i < bps.size() && bps[i] < win.hi(); ++i) {
        out.push_back({interval(lo, bps[i]), i});
        lo = bps[i];
    }
    out.push_back({interval(lo, win.hi()), i});
    return out;
}

colour_set portion_dense(const q_colouring& c, const portion& p) {
    return std::visit(
        overloaded{[](const constant_gen& g) -> colour_set { return {g.value}; },
                   [](const denominator_gen& g) -> colour_set { return g.word.recurring(); },
                   [&](const dyadic_parity_gen& g) -> colour_set { return dyadic_dense_set(g, p.span); }},
        c.cell_generators()[p.index]);
}

// Whether some reduced fraction with the given denominator lies in the span
// and is not overridden.
bool has_unoverridden_fraction(const std::vector<exceptional_point>& exc, const interval& span, i64 b) {
    i128 a = floordiv(i128(span.lo().num()) * b, span.lo().den()) + 1;
    for (; a * span.hi().den() < i128(span.hi().num()) * b; ++a) {
        if (a > (i128(1) << 62) || a < -(i128(1) << 62))
            throw unsupported_query("window too wide for exact occurrence");
        const i64 av = static_cast<i64>(a);
        if (std::gcd(av < 0 ? -av : av, b) != 1) continue;
        if (!override_at(exc, rat(av, b))) return true;
    }
    return false;
}

void insert_fractions(const interval& win, i64 b, std::set<rat>& out) {
    i128 a = floordiv(i128(win.lo().num()) * b, win.lo().den()) + 1;
    for (; a * win.hi().den() < i128(win.hi().num()) * b; ++a) {
        if (a > (i128(1) << 62) || a < -(i128(1) << 62))
            throw unsupported_query("window too wide to enumerate");
        const i64 av = static_cast<i64>(a);
        if (std::gcd(av < 0 ? -av : av, b) != 1) continue;
        out.insert(rat(av, b));
    }
}

void validate_generator(const generator& g, int alphabet) {
    std::visit(overloaded{[&](const constant_gen& c) {
                              if (c.value < 0 || c.value >= alphabet)
                                  throw bad_entry("cell colour outside the alphabet");
                          },
                          [&](const denominator_gen& d) {
                              if (d.word.alphabet() > alphabet)
                                  throw bad_entry("cell word letters outside the alphabet");
                          },
                          [&](const dyadic_parity_gen& d) {
                              const int k = d.schedule.alphabet();
                              if (k > 16) throw bad_entry("dyadic schedule alphabet too wide");
                              if (d.table.size() != (std::size_t{1} << k))
                                  throw bad_entry("dyadic table must cover every digit pattern");
                              for (colour v : d.table)
                                  if (v < 0 || v >= alphabet)
                                      throw bad_entry("dyadic table colour outside the alphabet");
                          }},
               g);
}

generator fuse(const generator& ga, const generator& gb, int ka, int kb) {
    const int out_alphabet = ka * kb;
    return std::visit(
        overloaded{
            [&](const constant_gen& x, const constant_gen& y) -> generator {
                return constant_gen{pair_colour(x.value, y.value, kb)};
            },
            [&](const constant_gen& x, const denominator_gen& y) -> generator {
                std::vector<colour> map(static_cast<std::size_t>(y.word.alphabet()));
                for (colour t = 0; t < y.word.alphabet(); ++t)
                    map[static_cast<std::size_t>(t)] = pair_colour(x.value, t, kb);
                return denominator_gen{y.word.relabel(out_alphabet, map)};
            },
            [&](const denominator_gen& x, const constant_gen& y) -> generator {
                std::vector<colour> map(static_cast<std::size_t>(x.word.alphabet()));
                for (colour t = 0; t < x.word.alphabet(); ++t)
                    map[static_cast<std::size_t>(t)] = pair_colour(t, y.value, kb);
                return denominator_gen{x.word.relabel(out_alphabet, map)};
            },
            [&](const denominator_gen& x, const denominator_gen& y) -> generator {
                return denominator_gen{nword::zip(
                    x.word, y.word, out_alphabet,
                    [kb](colour l, colour r) { return pair_colour(l, r, kb); })};
            },
            [&](const constant_gen& x, const dyadic_parity_gen& y) -> generator {
                std::vector<colour> table = y.table;
                for (colour& v : table) v = pair_colour(x.value, v, kb);
                return dyadic_parity_gen{y.schedule, std::move(table)};
            },
            [&](const dyadic_parity_gen& x, const constant_gen& y) -> generator {
                std::vector<colour> table = x.table;
                for (colour& v : table) v = pair_colour(v, y.value, kb);
                return dyadic_parity_gen{x.schedule, std::move(table)};
            },
            [](const auto&, const auto&) -> generator {
                throw pair_unsupported("cannot fuse these cell generators exactly");
            }},
        ga, gb);
}

}  // namespace

q_colouring::q_colouring(int alphabet, std::optional<interval> ambient,
                         std::vector<rat> breakpoints, std::vector<generator> cells,
                         std::vector<exceptional_point> exceptional)
    : alphabet_(alphabet),
      ambient_(std::move(ambient)),
      breakpoints_(std::move(breakpoints)),
      cells_(std::move(cells)),
      exceptional_(std::move(exceptional)) {
    if (alphabet_ < 1) throw bad_entry("colouring alphabet must be positive");
    if (cells_.size() != breakpoints_.size() + 1)
        throw bad_entry("colouring needs exactly one cell per breakpoint gap");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] < breakpoints_[i + 1]))
            throw bad_entry("breakpoints must strictly increase");
    if (ambient_)
        for (const rat& b : breakpoints_)
            if (!ambient_->contains(b)) throw bad_entry("breakpoint outside the ambient");
    for (const generator& g : cells_) validate_generator(g, alphabet_);
    std::sort(exceptional_.begin(), exceptional_.end(),
              [](const exceptional_point& a, const exceptional_point& b) { return a.point < b.point; });
    for (std::size_t i = 0; i < exceptional_.size(); ++i) {
        const exceptional_point& e = exceptional_[i];
        if (e.value < 0 || e.value >= alphabet_) throw bad_entry("exceptional colour outside the alphabet");
        if (ambient_ && !ambient_->contains(e.point)) throw bad_entry("exceptional point outside the ambient");
        if (i > 0 && exceptional_[i - 1].point == e.point) throw bad_entry("duplicate exceptional point");
        if (std::binary_search(breakpoints_.begin(), breakpoints_.end(), e.point)) continue;
        if (std::holds_alternative<dyadic_parity_gen>(cells_[cell_index_of(breakpoints_, e.point)]))
            throw bad_entry("exceptional point inside a dyadic parity cell");
    }
}

q_colouring q_colouring::single_cell(int alphabet, generator gen, std::optional<interval> ambient,
                                     std::vector<exceptional_point> exceptional) {
    std::vector<generator> cells;
    cells.push_back(std::move(gen));
    return q_colouring(alphabet, std::move(ambient), {}, std::move(cells), std::move(exceptional));
}

colour q_colouring::at(const rat& q) const {
    if (ambient_ && !ambient_->contains(q))
        throw point_outside_ambient("point " + q.str() + " outside the ambient");
    if (const exceptional_point* e = override_at(exceptional_, q)) return e->value;
    return std::visit(
        overloaded{[](const constant_gen& g) -> colour { return g.value; },
                   [&](const denominator_gen& g) -> colour { return g.word.at(q.den()); },
                   [&](const dyadic_parity_gen& g) -> colour {
                       return g.table[static_cast<std::size_t>(dyadic_pattern_at(g, q))];
                   }},
        cells_[cell_index_of(breakpoints_, q)]);
}

colour_set q_colouring::occurring(const interval& window) const {
    colour_set out;
    for (const portion& p : portions_of(*this, window)) {
        std::visit(overloaded{[&](const constant_gen& g) { out.insert(g.value); },
                              [&](const denominator_gen& g) {
                                  out.insert(g.word.recurring().begin(), g.word.recurring().end());
                                  const i64 pref = static_cast<i64>(g.word.prefix().size());
                                  for (i64 b = 1; b < pref; ++b) {
                                      const colour v = g.word.at(b);
                                      if (out.count(v)) continue;
                                      if (has_unoverridden_fraction(exceptional_, p.span, b)) out.insert(v);
                                  }
                              },
                              [&](const dyadic_parity_gen& g) {
                                  const colour_set cs = dyadic_occurring_set(g, p.span);
                                  out.insert(cs.begin(), cs.end());
                              }},
                   cells_[p.index]);
    }
    for (const rat& b : breakpoints_)
        if (window.contains(b)) out.insert(at(b));
    for (const exceptional_point& e : exceptional_)
        if (window.contains(e.point)) out.insert(e.value);
    return out;
}

colour_set q_colouring::dense(const interval& window) const {
    std::optional<colour_set> acc;
    for (const portion& p : portions_of(*this, window)) {
        colour_set d = portion_dense(*this, p);
        acc = acc ? set_intersect(*acc, d) : std::move(d);
        if (acc->empty()) break;
    }
    return *acc;
}

bool q_colouring::is_shuffle(const interval& window) const {
    return occurring(window) == dense(window);
}

cell_decomposition q_colouring::cells(const interval& window) const {
    cell_decomposition out;
    for (const portion& p : portions_of(*this, window)) {
        cell_view view{p.span, p.index, portion_dense(*this, p), {}};
        for (const exceptional_point& e : exceptional_)
            if (p.span.contains(e.point)) view.points.push_back(e);
        out.views.push_back(std::move(view));
    }
    for (const rat& b : breakpoints_)
        if (window.contains(b)) out.boundaries.push_back({b, at(b)});
    return out;
}

q_colouring q_colouring::relabel(int out_alphabet, const std::vector<colour>& map) const {
    if (map.size() != static_cast<std::size_t>(alphabet_))
        throw bad_entry("relabel map must cover the alphabet");
    for (colour v : map)
        if (v < 0 || v >= out_alphabet) throw bad_entry("relabel target outside the alphabet");
    std::vector<generator> cells;
    for (const generator& g : cells_)
        cells.push_back(std::visit(
            overloaded{[&](const constant_gen& c) -> generator {
                           return constant_gen{map[static_cast<std::size_t>(c.value)]};
                       },
                       [&](const denominator_gen& d) -> generator {
                           const std::vector<colour> sub(map.begin(), map.begin() + d.word.alphabet());
                           return denominator_gen{d.word.relabel(out_alphabet, sub)};
                       },
                       [&](const dyadic_parity_gen& d) -> generator {
                           std::vector<colour> table = d.table;
                           for (colour& v : table) v = map[static_cast<std::size_t>(v)];
                           return dyadic_parity_gen{d.schedule, std::move(table)};
                       }},
            g));
    std::vector<exceptional_point> exc = exceptional_;
    for (exceptional_point& e : exc) e.value = map[static_cast<std::size_t>(e.value)];
    return q_colouring(out_alphabet, ambient_, breakpoints_, std::move(cells), std::move(exc));
}

q_colouring q_colouring::restrict(const interval& window) const {
    if (ambient_ && !ambient_->contains(window))
        throw point_outside_ambient("restriction exceeds the ambient");
    const auto first = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), window.lo());
    const auto last = std::lower_bound(first, breakpoints_.end(), window.hi());
    std::vector<rat> bps(first, last);
    const auto cell_first = cells_.begin() + (first - breakpoints_.begin());
    std::vector<generator> cells(cell_first, cell_first + (last - first) + 1);
    std::vector<exceptional_point> exc;
    for (const exceptional_point& e : exceptional_)
        if (window.contains(e.point)) exc.push_back(e);
    return q_colouring(alphabet_, window, std::move(bps), std::move(cells), std::move(exc));
}

colour pair_colour(colour left, colour right, int right_alphabet) {
    return left * right_alphabet + right;
}

std::pair<colour, colour> unpair_colour(colour pair, int right_alphabet) {
    return {pair / right_alphabet, pair % right_alphabet};
}

q_colouring pair_colouring(const q_colouring& a, const q_colouring& b) {
    if (a.ambient() != b.ambient()) throw ambient_mismatch("paired colourings need one ambient");
    const int ka = a.alphabet();
    const int kb = b.alphabet();
    std::vector<rat> merged;
    std::merge(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
               b.breakpoints().end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    const auto cell_in = [&](const q_colouring& c, std::size_t region) -> const generator& {
        const std::size_t i =
            region == 0 ? 0 : cell_index_of(c.breakpoints(), merged[region - 1]);
        return c.cell_generators()[i];
    };
    std::vector<generator> cells;
    for (std::size_t region = 0; region <= merged.size(); ++region)
        cells.push_back(fuse(cell_in(a, region), cell_in(b, region), ka, kb));
    std::set<rat> points;
    for (const exceptional_point& e : a.exceptional()) points.insert(e.point);
    for (const exceptional_point& e : b.exceptional()) points.insert(e.point);
    std::vector<exceptional_point> exc;
    for (const rat& q : points) exc.push_back({q, pair_colour(a.at(q), b.at(q), kb)});
    // The constructor would reject these as bad entries, but here the real
    // problem is the pairing itself.
    for (const exceptional_point& e : exc) {
        if (std::binary_search(merged.begin(), merged.end(), e.point)) continue;
        if (std::holds_alternative<dyadic_parity_gen>(cells[cell_index_of(merged, e.point)]))
            throw pair_unsupported("exceptional point would land in a dyadic parity cell");
    }
    return q_colouring(ka * kb, a.ambient(), std::move(merged), std::move(cells), std::move(exc));
}

shuffle_answer shuffle_oracle(const q_colouring& c) {
    for (const generator& g : c.cell_generators())
        if (std::holds_alternative<dyadic_parity_gen>(g))
            throw unsupported_query("shuffle search needs exact occurrence on every cell");
    const auto& bps = c.breakpoints();
    std::vector<interval> candidates;
    for (std::size_t i = 0; i < c.cell_generators().size(); ++i) {
        std::optional<rat> lo =
            i > 0 ? std::optional<rat>(bps[i - 1])
                  : (c.ambient() ? std::optional<rat>(c.ambient()->lo()) : std::nullopt);
        std::optional<rat> hi =
            i < bps.size() ? std::optional<rat>(bps[i])
                           : (c.ambient() ? std::optional<rat>(c.ambient()->hi()) : std::nullopt);
        // Unbounded cells are probed on a unit-sized window at their edge.
        const interval window =
            lo && hi ? interval(*lo, *hi)
            : lo     ? interval(*lo, rat(lo->floor() + 2))
            : hi     ? interval(rat(ceil_i64(*hi) - 2), *hi)
                     : interval(rat(0), rat(1));
        std::set<rat> cuts;
        for (const exceptional_point& e : c.exceptional())
            if (window.contains(e.point)) cuts.insert(e.point);
        if (const auto* d = std::get_if<denominator_gen>(&c.cell_generators()[i])) {
            const i64 pref = static_cast<i64>(d->word.prefix().size());
            for (i64 b = 1; b < pref; ++b) {
                if (d->word.recurring().count(d->word.at(b))) continue;
                insert_fractions(window, b, cuts);
            }
        }
        rat cur = window.lo();
        for (const rat& q : cuts) {
            candidates.emplace_back(cur, q);
            cur = q;
        }
        candidates.emplace_back(cur, window.hi());
        if (!cuts.empty()) candidates.push_back(window);
    }
    if (candidates.empty()) throw empty_ambient("no candidate windows");
    std::optional<shuffle_answer> best;
    for (const interval& cand : candidates) {
        colour_set occ = c.occurring(cand);
        if (!best || occ.size() < best->colours.size() ||
            (occ.size() == best->colours.size() && interval_order_less(cand, best->window)))
            best = shuffle_answer{cand, std::move(occ)};
    }
    if (!c.is_shuffle(best->window)) throw law_violated("fewest-colour candidate is not a shuffle");
    return *best;
}

std::optional<rat> find_point(const q_colouring& c, const interval& window, colour v,
                              std::int64_t budget) {
    if (c.ambient() && !c.ambient()->contains(window))
        throw point_outside_ambient("window outside the ambient");
    std::int64_t seen = 0;
    for (std::int64_t n = 0; seen < budget; ++n) {
        const rat q = enum_q(n);
        if (!window.contains(q)) continue;
        ++seen;
        if (c.at(q) == v) return q;
    }
    return std::nullopt;
}

colour first_colour_in(const q_colouring& c, const interval& window) {
    if (c.ambient() && !c.ambient()->contains(window))
        throw point_outside_ambient("window outside the ambient");
    for (std::int64_t n = 0;; ++n) {
        const rat q = enum_q(n);
        if (window.contains(q)) return c.at(q);
    }
}

int binary_digit(const rat& q, int t) {
    if (t < 0 || t > 62) throw domain_violation("binary digit position out of range");
    return parity(floordiv(i128(q.num()) << t, q.den()));
}

std::int64_t dyadic_horizon(std::int64_t denominator) {
    if (denominator < 1) throw domain_violation("denominator must be positive");
    const std::int64_t h = std::bit_width(static_cast<std::uint64_t>(denominator)) - 4;
    return std::max<std::int64_t>(h, -1);
}

std::vector<int> dyadic_depths(const nword& schedule, std::int64_t denominator) {
    const std::int64_t h = dyadic_horizon(denominator);
    std::vector<int> out(static_cast<std::size_t>(schedule.alphabet()), 0);
    if (h < 0) return out;
    for (colour j = 0; j < schedule.alphabet(); ++j)
        out[static_cast<std::size_t>(j)] =
            static_cast<int>(1 + schedule.last_occurrence_upto(j, h));
    return out;
}

namespace {

using njson = nlohmann::json;

njson word_tree(const nword& w) {
    return njson{{"alphabet", w.alphabet()}, {"prefix", w.prefix()}, {"cycle", w.cycle()}};
}

nword word_from_tree(const njson& j) {
    for (const char* key : {"alphabet", "prefix", "cycle"})
        if (!j.is_object() || !j.contains(key))
            throw parse_error(std::string("word document needs ") + key);
    return nword(j.at("alphabet").get<int>(), j.at("prefix").get<std::vector<colour>>(),
                 j.at("cycle").get<std::vector<colour>>());
}

njson generator_tree(const generator& g) {
    return std::visit(
        overloaded{[](const constant_gen& c) {
                       return njson{{"kind", "constant"}, {"value", c.value}};
                   },
                   [](const denominator_gen& d) {
                       return njson{{"kind", "denominator"}, {"word", word_tree(d.word)}};
                   },
                   [](const dyadic_parity_gen& d) {
                       return njson{{"kind", "dyadicParity"},
                                    {"schedule", word_tree(d.schedule)},
                                    {"table", d.table}};
                   }},
        g);
}

generator generator_from_tree(const njson& j) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error("cell document needs a kind");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant_gen{j.at("value").get<colour>()};
    if (kind == "denominator") return denominator_gen{word_from_tree(j.at("word"))};
    if (kind == "dyadicParity")
        return dyadic_parity_gen{word_from_tree(j.at("schedule")),
                                 j.at("table").get<std::vector<colour>>()};
    throw parse_error("unknown cell kind: " + kind);
}

q_colouring colouring_from_tree(const njson& j) {
    if (!j.is_object()) throw parse_error("colouring document must be an object");
    if (j.contains("kind")) {
        if (j.at("kind") != "pair" || !j.contains("left") || !j.contains("right"))
            throw parse_error("colouring kind must be pair");
        return pair_colouring(colouring_from_tree(j.at("left")),
                              colouring_from_tree(j.at("right")));
    }
    for (const char* key : {"alphabet", "ambient", "breakpoints", "cells", "exceptional"})
        if (!j.contains(key)) throw parse_error(std::string("colouring document needs ") + key);
    std::optional<interval> ambient;
    if (!j.at("ambient").is_null())
        ambient = interval(rat::parse(j.at("ambient").at("lo").get<std::string>()),
                           rat::parse(j.at("ambient").at("hi").get<std::string>()));
    std::vector<rat> bps;
    for (const njson& t : j.at("breakpoints")) bps.push_back(rat::parse(t.get<std::string>()));
    std::vector<generator> cells;
    for (const njson& t : j.at("cells")) cells.push_back(generator_from_tree(t));
    std::vector<exceptional_point> exc;
    for (const njson& t : j.at("exceptional"))
        exc.push_back({rat::parse(t.at("point").get<std::string>()), t.at("colour").get<colour>()});
    return q_colouring(j.at("alphabet").get<int>(), std::move(ambient), std::move(bps),
                       std::move(cells), std::move(exc));
}

}  // namespace

std::string nword_to_json(const nword& w) { return word_tree(w).dump(); }

nword nword_from_json(const std::string& text) {
    try {
        return word_from_tree(njson::parse(text));
    } catch (const njson::exception& e) {
        throw parse_error(std::string("malformed word document: ") + e.what());
    }
}

std::string q_colouring_to_json(const q_colouring& c) {
    njson j;
    j["alphabet"] = c.alphabet();
    j["ambient"] = c.ambient() ? njson{{"lo", c.ambient()->lo().str()}, {"hi", c.ambient()->hi().str()}}
                               : njson(nullptr);
    njson bps = njson::array();
    for (const rat& b : c.breakpoints()) bps.push_back(b.str());
    j["breakpoints"] = std::move(bps);
    njson cells = njson::array();
    for (const generator& g : c.cell_generators()) cells.push_back(generator_tree(g));
    j["cells"] = std::move(cells);
    njson exc = njson::array();
    for (const exceptional_point& e : c.exceptional())
        exc.push_back(njson{{"point", e.point.str()}, {"colour", e.value}});
    j["exceptional"] = std::move(exc);
    return j.dump();
}

q_colouring q_colouring_from_json(const std::string& text) {
    try {
        return colouring_from_tree(njson::parse(text));
    } catch (const njson::exception& e) {
        throw parse_error(std::string("malformed colouring document: ") + e.what());
    }
}

std::string shuffle_answer_to_json(const shuffle_answer& a) {
    njson colours = njson::array();
    for (colour v : a.colours) colours.push_back(v);
    const njson j{{"interval", njson{{"lo", a.window.lo().str()}, {"hi", a.window.hi().str()}}},
                  {"colours", std::move(colours)}};
    return j.dump();
}

}  // namespace ramq
