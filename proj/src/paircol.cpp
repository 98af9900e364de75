#include "ramq/paircol.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "ramq/enumeration.hpp"
#include "ramq/rng.hpp"

namespace ramq {

namespace {

using njson = nlohmann::json;
using i64 = std::int64_t;
using i128 = __int128;

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::optional<interval> combine_ambients(const std::optional<interval>& a,
                                         const std::optional<interval>& b) {
    if (!a) return b;
    if (!b) return a;
    if (!(*a == *b))
        throw ambient_mismatch("product components disagree on the ambient");
    return a;
}

int mask_of(const colour_set& values) {
    int mask = 0;
    for (colour v : values) mask |= 1 << v;
    return mask;
}

// Occurrence data of the half-open segment [x, y): the interior colours
// plus the left endpoint's own colour, as a powerset-semigroup element.
// An endpoint on the open ambient's edge is not a coloured point and
// contributes nothing.
int occ_mask(const q_colouring& f, const rat& x, const rat& y) {
    colour_set occ = f.occurring(interval(x, y));
    if (!f.ambient() || f.ambient()->contains(x)) occ.insert(f.at(x));
    return mask_of(occ);
}

// Largest h >= 0 with |x - y| < 2^-h; pairs at least one apart read g(0).
i64 pair_depth(const rat& x, const rat& y) {
    rat w = (y - x).abs();
    if (w.num() >= w.den()) return 0;
    i64 h = 0;
    while (h < 80 && (i128(w.num()) << (h + 1)) < i128(w.den())) ++h;
    return h;
}

// Largest h >= 0 with width <= 2^-h: the shallowest depth realised by pairs
// strictly inside a window of that width.
i64 window_depth(const interval& window) {
    rat w = window.width();
    if (w.num() > w.den()) return 0;
    i64 h = 0;
    while (h < 80 && (i128(w.num()) << (h + 1)) <= i128(w.den())) ++h;
    return h;
}

// First index from which a scale word is constant.
i64 stabilisation(const nword& w) {
    i64 pref = i64(w.prefix().size());
    colour tail = w.at(pref);
    i64 s = 0;
    for (i64 i = 0; i < pref; ++i)
        if (w.at(i) != tail) s = i + 1;
    return s;
}

const rat& check_order(const rat& x, const rat& y) {
    if (!(x < y)) throw order_violation("pair endpoints must satisfy x < y");
    return x;
}

// Deterministic interior sample points for the law checks: dyadic
// subdivisions of the ambient (or of a fixed window when unbounded).
std::vector<rat> sample_pool(const std::optional<interval>& ambient) {
    interval window = ambient ? *ambient : interval(rat(-4), rat(4));
    std::vector<rat> pool;
    rat width = window.width();
    for (int d = 1; d <= 7; ++d)
        for (i64 j = 1; j < (i64(1) << d); j += 2)
            pool.push_back(window.lo() + width * rat(j, i64(1) << d));
    return pool;
}

// --- cell machinery shared by the ordered search and the trace colouring.

struct cell_span {
    std::optional<rat> lo, hi;
    std::size_t index = 0;
};

std::vector<cell_span> spans_of(const q_colouring& f) {
    const auto& bps = f.breakpoints();
    std::vector<cell_span> out;
    for (std::size_t i = 0; i <= bps.size(); ++i) {
        cell_span s;
        s.index = i;
        if (i > 0)
            s.lo = bps[i - 1];
        else if (f.ambient())
            s.lo = f.ambient()->lo();
        if (i < bps.size())
            s.hi = bps[i];
        else if (f.ambient())
            s.hi = f.ambient()->hi();
        out.push_back(std::move(s));
    }
    return out;
}

// Bounded probe for one cell: the span itself, or a unit-ish window inside
// an unbounded end.
interval probe_window(const cell_span& s) {
    if (s.lo && s.hi) return interval(*s.lo, *s.hi);
    if (s.lo) return interval(*s.lo, rat(s.lo->floor() + 2));
    if (s.hi) return interval(rat(-((-*s.hi).floor()) - 2), *s.hi);
    return interval(rat(0), rat(1));
}

void check_enumerable(const interval& window) {
    if (rat(i64(1) << 20) < window.width())
        throw unsupported_query("window too wide to enumerate sporadic points");
}

// Reduced fractions with denominator b strictly inside the window.
void insert_fractions(std::set<rat>& out, i64 b, const interval& window) {
    i64 a = (window.lo() * rat(b)).floor() + 1;
    for (; rat(a, b) < window.hi(); ++a)
        if (std::gcd(a < 0 ? -a : a, b) == 1) out.insert(rat(a, b));
}

// Points inside the probe window where the cell's colour pattern is broken:
// exceptional points and the non-recurring denominator positions.
std::vector<rat> cut_points(const q_colouring& f, std::size_t cell,
                            const interval& window) {
    check_enumerable(window);
    std::set<rat> cuts;
    for (const auto& e : f.exceptional())
        if (window.contains(e.point)) cuts.insert(e.point);
    if (const auto* d = std::get_if<denominator_gen>(&f.cell_generators()[cell])) {
        const nword& w = d->word;
        for (i64 b = 1; b < i64(w.prefix().size()); ++b) {
            if (w.recurring().count(w.at(b))) continue;
            insert_fractions(cuts, b, window);
        }
    }
    return {cuts.begin(), cuts.end()};
}

std::vector<interval> gap_windows(const interval& window, const std::vector<rat>& cuts) {
    std::vector<interval> out;
    rat lo = window.lo();
    for (const rat& c : cuts) {
        out.emplace_back(lo, c);
        lo = c;
    }
    out.emplace_back(lo, window.hi());
    return out;
}

// First part point inside the span, scanning denominators outward; parts
// are dense where we look, so small denominators suffice.
rat scan_point(const q_colouring& c, const interval& span, colour want) {
    for (i64 b = 1; b <= 4096; ++b) {
        i64 a = (span.lo() * rat(b)).floor() + 1;
        for (; rat(a, b) < span.hi(); ++a) {
            if (std::gcd(a < 0 ? -a : a, b) != 1) continue;
            if (c.at(rat(a, b)) == want) return rat(a, b);
        }
    }
    throw machine_fault("failed to locate a dense part representative");
}

}  // namespace

// --- additive colourings

additive_q_colouring::additive_q_colouring(finite_semigroup s,
                                           std::optional<interval> ambient,
                                           additive_builder b)
    : semigroup_(std::move(s)), ambient_(std::move(ambient)), builder_(std::move(b)) {}

additive_q_colouring additive_q_colouring::occ_hom(q_colouring points,
                                                   semigroup_hom hom) {
    int k = points.alphabet();
    if (k > 10) throw bad_entry("occurrence alphabet too large for a powerset source");
    if (!(hom.source == powerset_union(k)))
        throw bad_entry("hom source must be the powerset semigroup of the alphabet");
    validate_hom(hom);
    finite_semigroup target = hom.target;
    std::optional<interval> ambient = points.ambient();
    return additive_q_colouring(std::move(target), std::move(ambient),
                                occ_hom_builder{std::move(points), std::move(hom)});
}

additive_q_colouring additive_q_colouring::left_zero_lift(q_colouring points) {
    finite_semigroup s = left_zero(points.alphabet());
    std::optional<interval> ambient = points.ambient();
    return additive_q_colouring(std::move(s), std::move(ambient),
                                left_zero_builder{std::move(points)});
}

additive_q_colouring additive_q_colouring::product(additive_q_colouring left,
                                                   additive_q_colouring right) {
    finite_semigroup s = ramq::product(left.semigroup(), right.semigroup());
    std::optional<interval> ambient = combine_ambients(left.ambient(), right.ambient());
    additive_product_builder b{
        std::make_shared<const additive_q_colouring>(std::move(left)),
        std::make_shared<const additive_q_colouring>(std::move(right))};
    return additive_q_colouring(std::move(s), std::move(ambient), std::move(b));
}

int additive_q_colouring::eval(const rat& x, const rat& y) const {
    check_order(x, y);
    return std::visit(
        overloaded{
            [&](const occ_hom_builder& b) {
                const auto& ambient = b.points.ambient();
                if (ambient && (x < ambient->lo() || ambient->hi() < y))
                    throw point_outside_ambient("pair (" + x.str() + ", " + y.str() +
                                                ") outside the ambient");
                return apply_hom(b.hom, occ_mask(b.points, x, y));
            },
            [&](const left_zero_builder& b) {
                const auto& ambient = b.points.ambient();
                if (ambient && ambient->hi() < y)
                    throw point_outside_ambient("pair endpoint beyond the ambient: " +
                                                y.str());
                return b.points.at(x);
            },
            [&](const additive_product_builder& b) {
                int l = b.left->eval(x, y);
                int r = b.right->eval(x, y);
                return l * b.right->semigroup().size() + r;
            }},
        builder_);
}

int eval_pair(const additive_q_colouring& c, const rat& x, const rat& y) {
    return c.eval(x, y);
}

// --- ordered colourings

ordered_q_colouring::ordered_q_colouring(finite_poset p, std::optional<interval> ambient,
                                         ordered_builder b)
    : poset_(std::move(p)), ambient_(std::move(ambient)), builder_(std::move(b)) {}

ordered_q_colouring ordered_q_colouring::scale(nword word, finite_poset p) {
    if (word.alphabet() != p.size())
        throw bad_entry("scale word letters must index the poset");
    i64 pref = i64(word.prefix().size());
    colour tail = word.at(pref);
    for (colour c : word.cycle())
        if (c != tail) throw bad_entry("scale word needs a constant cycle");
    for (i64 i = 0; i <= pref; ++i)
        if (!p.leq(word.at(i + 1), word.at(i)))
            throw bad_entry("scale word must be antitone");
    return ordered_q_colouring(std::move(p), std::nullopt,
                               scale_builder{std::move(word)});
}

ordered_q_colouring ordered_q_colouring::j_proj(additive_q_colouring base) {
    auto [order, classes] = j_order_poset(base.semigroup());
    // Additivity sends wider pairs deeper into the ideal preorder, so the
    // orderedness law needs the reversed quotient.
    finite_poset p = dual(order);
    std::optional<interval> ambient = base.ambient();
    j_proj_builder b{std::make_shared<const additive_q_colouring>(std::move(base)),
                     std::move(classes)};
    return ordered_q_colouring(std::move(p), std::move(ambient), std::move(b));
}

ordered_q_colouring ordered_q_colouring::product(ordered_q_colouring left,
                                                 ordered_q_colouring right) {
    finite_poset p = ramq::product(left.poset(), right.poset());
    std::optional<interval> ambient = combine_ambients(left.ambient(), right.ambient());
    ordered_product_builder b{
        std::make_shared<const ordered_q_colouring>(std::move(left)),
        std::make_shared<const ordered_q_colouring>(std::move(right))};
    return ordered_q_colouring(std::move(p), std::move(ambient), std::move(b));
}

int ordered_q_colouring::eval(const rat& x, const rat& y) const {
    check_order(x, y);
    return std::visit(
        overloaded{
            [&](const scale_builder& b) { return b.word.at(pair_depth(x, y)); },
            [&](const j_proj_builder& b) {
                return b.classes[std::size_t(b.base->eval(x, y))];
            },
            [&](const ordered_product_builder& b) {
                int l = b.left->eval(x, y);
                int r = b.right->eval(x, y);
                return l * b.right->poset().size() + r;
            }},
        builder_);
}

int eval_pair(const ordered_q_colouring& c, const rat& x, const rat& y) {
    return c.eval(x, y);
}

// --- colourings of natural pairs

additive_n_colouring::additive_n_colouring(finite_semigroup s, nword w)
    : semigroup(std::move(s)), word(std::move(w)) {
    if (word.alphabet() > semigroup.size())
        throw bad_entry("word letters must be semigroup elements");
}

ordered_n_colouring::ordered_n_colouring(nword w, finite_poset p, std::vector<int> m)
    : word(std::move(w)), poset(std::move(p)), mono(std::move(m)) {
    int k = word.alphabet();
    if (k > 16) throw bad_entry("ordered word alphabet too large for subset maps");
    if (i64(mono.size()) != (i64(1) << k))
        throw bad_entry("subset map must cover every letter set");
    for (int v : mono)
        if (v < 0 || v >= poset.size())
            throw bad_entry("subset map value outside the poset");
    for (int mask = 0; mask < (1 << k); ++mask)
        for (int j = 0; j < k; ++j)
            if (!(mask & (1 << j)) &&
                !poset.leq(mono[std::size_t(mask)], mono[std::size_t(mask | (1 << j))]))
                throw bad_entry("subset map is not monotone");
}

namespace {

void check_n_order(i64 m, i64 n) {
    if (m < 0) throw domain_violation("pair positions must be non-negative");
    if (!(m < n)) throw order_violation("pair endpoints must satisfy m < n");
}

int eval_additive_n(const additive_n_colouring& c, i64 m, i64 n) {
    const nword& w = c.word;
    i64 pref = i64(w.prefix().size());
    i64 cyc = i64(w.cycle().size());
    std::optional<int> acc;
    auto push = [&](int v) { acc = acc ? c.semigroup.mul(*acc, v) : v; };
    i64 i = m;
    while (i < n && (i < pref || (i - pref) % cyc != 0)) push(w.at(i)), ++i;
    if (i < n) {
        i64 reps = (n - i) / cyc;
        if (reps > 0) {
            std::optional<int> block;
            for (colour v : w.cycle()) block = block ? c.semigroup.mul(*block, v) : v;
            push(c.semigroup.pow(*block, reps));
            i += reps * cyc;
        }
        while (i < n) push(w.at(i)), ++i;
    }
    return *acc;
}

// Bitmask of the letters at positions [m, n).
int letters_mask(const nword& w, i64 m, i64 n) {
    i64 pref = i64(w.prefix().size());
    i64 cyc = i64(w.cycle().size());
    int mask = 0;
    for (i64 i = m; i < std::min(n, pref); ++i) mask |= 1 << w.at(i);
    i64 lo = std::max(m, pref);
    if (n - lo >= cyc)
        for (colour v : w.cycle()) mask |= 1 << v;
    else
        for (i64 i = lo; i < n; ++i) mask |= 1 << w.at(i);
    return mask;
}

}  // namespace

int eval_pair(const n_pair_colouring& c, i64 m, i64 n) {
    check_n_order(m, n);
    return std::visit(
        overloaded{[&](const additive_n_colouring& a) { return eval_additive_n(a, m, n); },
                   [&](const ordered_n_colouring& o) {
                       return o.mono[std::size_t(letters_mask(o.word, m, n))];
                   }},
        c);
}

// --- law checks

void validate_structure(const additive_q_colouring& c, int samples) {
    std::vector<rat> pool = sample_pool(c.ambient());
    splitmix64 rng(0x9a1c0ffeeull);
    for (int it = 0; it < samples; ++it) {
        rat p[3];
        do {
            for (auto& q : p) q = pool[rng.below(pool.size())];
            std::sort(std::begin(p), std::end(p));
        } while (p[0] == p[1] || p[1] == p[2]);
        int whole = c.eval(p[0], p[2]);
        int split = c.semigroup().mul(c.eval(p[0], p[1]), c.eval(p[1], p[2]));
        if (whole != split)
            throw law_violated("additive law failed at (" + p[0].str() + ", " +
                               p[1].str() + ", " + p[2].str() + ")");
    }
}

void validate_structure(const ordered_q_colouring& c, int samples) {
    std::vector<rat> pool = sample_pool(c.ambient());
    splitmix64 rng(0x9a1c0ffeeull);
    for (int it = 0; it < samples; ++it) {
        rat p[4];
        do {
            for (auto& q : p) q = pool[rng.below(pool.size())];
            std::sort(std::begin(p), std::end(p));
        } while (p[1] == p[2]);
        int inner = c.eval(p[1], p[2]);
        int outer = c.eval(p[0], p[3]);
        if (!c.poset().leq(inner, outer))
            throw law_violated("ordered law failed at (" + p[0].str() + " <= " +
                               p[1].str() + " < " + p[2].str() + " <= " + p[3].str() +
                               ")");
    }
}

void validate_structure(const n_pair_colouring& c, int samples) {
    splitmix64 rng(0x9a1c0ffeeull);
    std::visit(
        overloaded{
            [&](const additive_n_colouring& a) {
                for (int it = 0; it < samples; ++it) {
                    i64 x = i64(rng.below(400));
                    i64 y = x + 1 + i64(rng.below(60));
                    i64 z = y + 1 + i64(rng.below(60));
                    int whole = eval_additive_n(a, x, z);
                    int split =
                        a.semigroup.mul(eval_additive_n(a, x, y), eval_additive_n(a, y, z));
                    if (whole != split)
                        throw law_violated("additive law failed at (" + std::to_string(x) +
                                           ", " + std::to_string(y) + ", " +
                                           std::to_string(z) + ")");
                }
            },
            [&](const ordered_n_colouring& o) {
                for (int it = 0; it < samples; ++it) {
                    i64 a = i64(rng.below(300));
                    i64 b = a + i64(rng.below(40));
                    i64 cc = b + 1 + i64(rng.below(40));
                    i64 d = cc + i64(rng.below(40));
                    int inner = o.mono[std::size_t(letters_mask(o.word, b, cc))];
                    int outer = o.mono[std::size_t(letters_mask(o.word, a, d))];
                    if (!o.poset.leq(inner, outer))
                        throw law_violated("ordered law failed at (" + std::to_string(a) +
                                           " <= " + std::to_string(b) + " < " +
                                           std::to_string(cc) + " <= " +
                                           std::to_string(d) + ")");
                }
            }},
        c);
}

// --- homogeneity

std::optional<int> is_pair_homogeneous(const ordered_q_colouring& c,
                                       const interval& window) {
    return std::visit(
        overloaded{
            [&](const scale_builder& b) -> std::optional<int> {
                i64 d0 = window_depth(window);
                colour tail = b.word.at(i64(b.word.prefix().size()));
                for (i64 i = d0; i < i64(b.word.prefix().size()); ++i)
                    if (b.word.at(i) != tail) return std::nullopt;
                return tail;
            },
            [&](const j_proj_builder& b) -> std::optional<int> {
                return std::visit(
                    overloaded{
                        [&](const occ_hom_builder& ob) -> std::optional<int> {
                            // With every occurring colour dense, all pair
                            // occurrence sets collapse to occurring(window).
                            if (!ob.points.is_shuffle(window)) return std::nullopt;
                            int m = mask_of(ob.points.occurring(window));
                            return b.classes[std::size_t(apply_hom(ob.hom, m))];
                        },
                        [&](const left_zero_builder& lb) -> std::optional<int> {
                            std::set<int> classes;
                            for (colour v : lb.points.occurring(window))
                                classes.insert(b.classes[std::size_t(v)]);
                            if (classes.size() == 1) return *classes.begin();
                            return std::nullopt;
                        },
                        [&](const additive_product_builder&) -> std::optional<int> {
                            throw builder_not_closed(
                                "j-projection of a product has no componentwise "
                                "class data");
                        }},
                    b.base->builder());
            },
            [&](const ordered_product_builder& b) -> std::optional<int> {
                auto l = is_pair_homogeneous(*b.left, window);
                if (!l) return std::nullopt;
                auto r = is_pair_homogeneous(*b.right, window);
                if (!r) return std::nullopt;
                return *l * b.right->poset().size() + *r;
            }},
        c.builder());
}

namespace {

ordered_answer ort_search(const ordered_q_colouring& c,
                          const std::optional<interval>& within) {
    return std::visit(
        overloaded{
            [&](const scale_builder& b) -> ordered_answer {
                i64 s = stabilisation(b.word);
                colour tail = b.word.at(i64(b.word.prefix().size()));
                if (!within)
                    return {s == 0 ? interval(rat(0), rat(1))
                                   : interval(rat(0), pow2(int(-(s + 1)))),
                            tail};
                rat hi = within->hi();
                if (s > 0) {
                    rat cap = within->lo() + pow2(int(-(s + 1)));
                    if (cap < hi) hi = cap;
                }
                return {interval(within->lo(), hi), tail};
            },
            [&](const j_proj_builder& b) -> ordered_answer {
                const q_colouring* points = nullptr;
                if (const auto* ob = std::get_if<occ_hom_builder>(&b.base->builder()))
                    points = &ob->points;
                else if (const auto* lb =
                             std::get_if<left_zero_builder>(&b.base->builder()))
                    points = &lb->points;
                else
                    throw builder_not_closed(
                        "j-projection of a product has no componentwise class data");
                q_colouring f = within ? points->restrict(*within) : *points;
                std::vector<ordered_answer> candidates;
                for (const cell_span& span : spans_of(f)) {
                    interval probe = probe_window(span);
                    for (const interval& gap :
                         gap_windows(probe, cut_points(f, span.index, probe)))
                        if (auto v = is_pair_homogeneous(c, gap))
                            candidates.push_back({gap, *v});
                }
                if (candidates.empty())
                    throw unsupported_query("no homogeneous gap window found");
                const ordered_answer* best = nullptr;
                for (const auto& cand : candidates) {
                    bool minimal = true;
                    for (const auto& other : candidates)
                        if (c.poset().strictly_less(other.value, cand.value))
                            minimal = false;
                    if (!minimal) continue;
                    if (!best || interval_order_less(cand.window, best->window))
                        best = &cand;
                }
                return *best;
            },
            [&](const ordered_product_builder& b) -> ordered_answer {
                ordered_answer l = ort_search(*b.left, within);
                ordered_answer r = ort_search(*b.right, l.window);
                // The left answer stays homogeneous on the refined window.
                return {r.window, l.value * b.right->poset().size() + r.value};
            }},
        c.builder());
}

}  // namespace

ordered_answer ort_q_oracle(const ordered_q_colouring& c) {
    return ort_search(c, c.ambient());
}

// --- trace colouring

namespace {

q_colouring gamma_of_occ(const additive_q_colouring& c, const occ_hom_builder& b,
                         const rat& u, const rat& v) {
    const q_colouring& f = b.points;
    for (const auto& g : f.cell_generators())
        if (std::holds_alternative<dyadic_parity_gen>(g))
            throw unsupported_query(
                "dyadic cells admit no finite sporadic decomposition");
    interval window(u, v);
    check_enumerable(window);

    // The trace value can only move where the occurrence data of one of the
    // half-open segments jumps: cell boundaries, exceptional points, and the
    // isolated fractions of non-recurring denominator positions.
    std::set<rat> jump_set;
    cell_decomposition dec = f.cells(window);
    for (const auto& bd : dec.boundaries) jump_set.insert(bd.point);
    for (const auto& view : dec.views) {
        for (const auto& pt : view.points) jump_set.insert(pt.point);
        if (const auto* d =
                std::get_if<denominator_gen>(&f.cell_generators()[view.gen_index])) {
            const nword& w = d->word;
            for (i64 b = 1; b < i64(w.prefix().size()); ++b) {
                if (w.recurring().count(w.at(b))) continue;
                insert_fractions(jump_set, b, view.span);
            }
        }
    }

    int size = c.semigroup().size();
    std::vector<rat> jumps(jump_set.begin(), jump_set.end());
    std::vector<generator> cells;
    std::vector<exceptional_point> values;
    rat lo = u;
    for (const rat& j : jumps) {
        cells.push_back(constant_gen{
            pair_colour(c.eval(u, midpoint(lo, j)), c.eval(midpoint(lo, j), v), size)});
        values.push_back({j, pair_colour(c.eval(u, j), c.eval(j, v), size)});
        lo = j;
    }
    cells.push_back(constant_gen{
        pair_colour(c.eval(u, midpoint(lo, v)), c.eval(midpoint(lo, v), v), size)});
    return q_colouring(size * size, window, std::move(jumps), std::move(cells),
                       std::move(values));
}

q_colouring gamma_of_left_zero(const left_zero_builder& b, const rat& u, const rat& v) {
    int k = b.points.alphabet();
    int base = b.points.at(u) * k;
    std::vector<colour> map(std::size_t(k), 0);
    std::iota(map.begin(), map.end(), base);
    return b.points.restrict(interval(u, v)).relabel(k * k, map);
}

q_colouring gamma_of_product(const additive_product_builder& b, const rat& u,
                             const rat& v) {
    q_colouring gl = derive_gamma(*b.left, u, v);
    q_colouring gr = derive_gamma(*b.right, u, v);
    int n1 = b.left->semigroup().size();
    int n2 = b.right->semigroup().size();
    std::optional<q_colouring> fused;
    try {
        fused = pair_colouring(gl, gr);
    } catch (const pair_unsupported& e) {
        throw builder_not_closed(e.what());
    }
    // (l1, r1, l2, r2) into ((l1, l2), (r1, r2)) over the product semigroup.
    std::vector<colour> map(std::size_t(n1) * n1 * n2 * n2);
    for (int m = 0; m < int(map.size()); ++m) {
        auto [g1, g2] = unpair_colour(m, n2 * n2);
        auto [l1, r1] = unpair_colour(g1, n1);
        auto [l2, r2] = unpair_colour(g2, n2);
        map[std::size_t(m)] =
            pair_colour(pair_colour(l1, l2, n2), pair_colour(r1, r2, n2), n1 * n2);
    }
    return fused->relabel(n1 * n2 * n1 * n2, map);
}

}  // namespace

q_colouring derive_gamma(const additive_q_colouring& c, const rat& u, const rat& v) {
    check_order(u, v);
    return std::visit(
        overloaded{
            [&](const occ_hom_builder& b) { return gamma_of_occ(c, b, u, v); },
            [&](const left_zero_builder& b) { return gamma_of_left_zero(b, u, v); },
            [&](const additive_product_builder& b) { return gamma_of_product(b, u, v); }},
        c.builder());
}

// --- dense homogeneous decomposition

dense_homogeneous_answer art_q_oracle(const additive_q_colouring& c) {
    ordered_answer stage = ort_q_oracle(ordered_q_colouring::j_proj(c));
    rat u = stage.window.lo(), v = stage.window.hi();
    q_colouring trace = derive_gamma(c, u, v);
    shuffle_answer sh = shuffle_oracle(trace);
    const interval& window = sh.window;

    int size = c.semigroup().size();
    green_data green = green_structure(c.semigroup());
    dense_homogeneous_answer out{window, {}, std::nullopt, {}};

    for (colour m : trace.occurring(window)) {
        std::vector<colour> indicator(std::size_t(trace.alphabet()), 0);
        indicator[std::size_t(m)] = 1;
        q_colouring region = trace.restrict(window).relabel(2, indicator);
        if (!region.dense(window).count(1))
            throw verification_failed("part is not dense in the chosen window");

        // One representative pair per component pair decides: the pair
        // colour is constant between fixed gap cells of the trace.
        std::vector<rat> reps;
        cell_decomposition dec = region.cells(window);
        for (const auto& view : dec.views) {
            if (view.dense.count(1)) {
                rat first = scan_point(region, view.span, 1);
                reps.push_back(first);
                reps.push_back(scan_point(region, interval(first, view.span.hi()), 1));
            }
            for (const auto& pt : view.points)
                if (pt.value == 1) reps.push_back(pt.point);
        }
        for (const auto& bd : dec.boundaries)
            if (bd.value == 1) reps.push_back(bd.point);
        std::sort(reps.begin(), reps.end());

        int value = green.omega_power[std::size_t(c.eval(reps[0], reps[1]))];
        if (c.semigroup().mul(value, value) != value)
            throw verification_failed("part colour is not idempotent");
        for (std::size_t i = 0; i < reps.size(); ++i)
            for (std::size_t j = i + 1; j < reps.size(); ++j)
                if (c.eval(reps[i], reps[j]) != value)
                    throw verification_failed("part pair colour varies at (" +
                                              reps[i].str() + ", " + reps[j].str() + ")");

        auto [left, right] = unpair_colour(m, size);
        out.parts.push_back({left, right, value, std::move(region)});
        out.colours.insert(value);
    }

    for (const auto& part : out.parts)
        if (green.classes_j.class_of[std::size_t(part.value)] !=
            green.classes_j.class_of[std::size_t(out.parts[0].value)])
            throw verification_failed("part colours span several J-classes");
    if (out.colours.size() == 1) out.colour = *out.colours.begin();
    return out;
}

// --- natural-pair tools

n_recurring_structure recurring_structure(const n_pair_colouring& c) {
    const nword& w = std::visit(
        overloaded{[](const additive_n_colouring& a) -> const nword& { return a.word; },
                   [](const ordered_n_colouring& o) -> const nword& { return o.word; }},
        c);
    n_recurring_structure out;
    out.letters = w.recurring();
    for (i64 i = 0; i < i64(w.prefix().size()); ++i)
        if (!out.letters.count(w.at(i))) out.start = i + 1;
    return out;
}

n_homogeneous_set homogeneous_oracle(const n_pair_colouring& c) {
    return std::visit(
        overloaded{
            [](const additive_n_colouring& a) -> n_homogeneous_set {
                i64 pref = i64(a.word.prefix().size());
                i64 cyc = i64(a.word.cycle().size());
                std::optional<int> block;
                for (colour v : a.word.cycle())
                    block = block ? a.semigroup.mul(*block, v) : v;
                // Idempotent power of the cycle product.
                int t = 1, p = *block;
                while (a.semigroup.mul(p, p) != p) {
                    p = a.semigroup.mul(p, *block);
                    if (++t > a.semigroup.size() + 1)
                        throw machine_fault("no idempotent power found");
                }
                return {pref, t * cyc, p};
            },
            [](const ordered_n_colouring& o) -> n_homogeneous_set {
                int mask = 0;
                for (colour v : o.word.cycle()) mask |= 1 << v;
                return {i64(o.word.prefix().size()), i64(o.word.cycle().size()),
                        o.mono[std::size_t(mask)]};
            }},
        c);
}

// --- serialization

namespace {

njson subtree(const std::string& text) { return njson::parse(text); }

njson semigroup_tree(const finite_semigroup& s) {
    std::vector<std::vector<int>> table(std::size_t(s.size()),
                                        std::vector<int>(std::size_t(s.size())));
    for (int a = 0; a < s.size(); ++a)
        for (int b = 0; b < s.size(); ++b) table[std::size_t(a)][std::size_t(b)] = s.mul(a, b);
    return njson(table);
}

njson additive_tree(const additive_q_colouring& c) {
    return std::visit(
        overloaded{
            [](const occ_hom_builder& b) {
                return njson{{"builder", "occHom"},
                             {"colouring", subtree(q_colouring_to_json(b.points))},
                             {"hom",
                              {{"map", b.hom.map}, {"target", semigroup_tree(b.hom.target)}}}};
            },
            [](const left_zero_builder& b) {
                return njson{{"builder", "leftZeroLift"},
                             {"colouring", subtree(q_colouring_to_json(b.points))}};
            },
            [](const additive_product_builder& b) {
                return njson{{"builder", "product"},
                             {"left", additive_tree(*b.left)},
                             {"right", additive_tree(*b.right)}};
            }},
        c.builder());
}

additive_q_colouring additive_from_tree(const njson& j) {
    std::string builder = j.at("builder").get<std::string>();
    if (builder == "occHom") {
        q_colouring points = q_colouring_from_json(j.at("colouring").dump());
        finite_semigroup target(
            j.at("hom").at("target").get<std::vector<std::vector<int>>>());
        semigroup_hom hom{powerset_union(points.alphabet()), std::move(target),
                          j.at("hom").at("map").get<std::vector<int>>()};
        return additive_q_colouring::occ_hom(std::move(points), std::move(hom));
    }
    if (builder == "leftZeroLift")
        return additive_q_colouring::left_zero_lift(
            q_colouring_from_json(j.at("colouring").dump()));
    if (builder == "product")
        return additive_q_colouring::product(additive_from_tree(j.at("left")),
                                             additive_from_tree(j.at("right")));
    throw parse_error("unknown additive builder: " + builder);
}

njson ordered_tree(const ordered_q_colouring& c) {
    return std::visit(
        overloaded{
            [&](const scale_builder& b) {
                return njson{{"builder", "scale"},
                             {"poset", c.poset().matrix()},
                             {"word", subtree(nword_to_json(b.word))}};
            },
            [](const j_proj_builder& b) {
                return njson{{"builder", "jProj"}, {"base", additive_tree(*b.base)}};
            },
            [](const ordered_product_builder& b) {
                return njson{{"builder", "product"},
                             {"left", ordered_tree(*b.left)},
                             {"right", ordered_tree(*b.right)}};
            }},
        c.builder());
}

ordered_q_colouring ordered_from_tree(const njson& j) {
    std::string builder = j.at("builder").get<std::string>();
    if (builder == "scale")
        return ordered_q_colouring::scale(
            nword_from_json(j.at("word").dump()),
            finite_poset(j.at("poset").get<std::vector<std::vector<bool>>>()));
    if (builder == "jProj")
        return ordered_q_colouring::j_proj(additive_from_tree(j.at("base")));
    if (builder == "product")
        return ordered_q_colouring::product(ordered_from_tree(j.at("left")),
                                            ordered_from_tree(j.at("right")));
    throw parse_error("unknown ordered builder: " + builder);
}

njson interval_tree(const interval& iv) {
    return njson{{"lo", iv.lo().str()}, {"hi", iv.hi().str()}};
}

}  // namespace

std::string additive_colouring_to_json(const additive_q_colouring& c) {
    return additive_tree(c).dump();
}

additive_q_colouring additive_colouring_from_json(const std::string& text) {
    try {
        return additive_from_tree(njson::parse(text));
    } catch (const njson::exception& e) {
        throw parse_error(std::string("bad additive colouring document: ") + e.what());
    }
}

std::string ordered_colouring_to_json(const ordered_q_colouring& c) {
    return ordered_tree(c).dump();
}

ordered_q_colouring ordered_colouring_from_json(const std::string& text) {
    try {
        return ordered_from_tree(njson::parse(text));
    } catch (const njson::exception& e) {
        throw parse_error(std::string("bad ordered colouring document: ") + e.what());
    }
}

std::string n_pair_colouring_to_json(const n_pair_colouring& c) {
    njson j = std::visit(
        overloaded{[](const additive_n_colouring& a) {
                       return njson{{"kind", "additiveN"},
                                    {"table", semigroup_tree(a.semigroup)},
                                    {"word", subtree(nword_to_json(a.word))}};
                   },
                   [](const ordered_n_colouring& o) {
                       return njson{{"kind", "orderedN"},
                                    {"mono", o.mono},
                                    {"poset", o.poset.matrix()},
                                    {"word", subtree(nword_to_json(o.word))}};
                   }},
        c);
    return j.dump();
}

n_pair_colouring n_pair_colouring_from_json(const std::string& text) {
    try {
        njson j = njson::parse(text);
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "additiveN")
            return additive_n_colouring(
                finite_semigroup(j.at("table").get<std::vector<std::vector<int>>>()),
                nword_from_json(j.at("word").dump()));
        if (kind == "orderedN")
            return ordered_n_colouring(
                nword_from_json(j.at("word").dump()),
                finite_poset(j.at("poset").get<std::vector<std::vector<bool>>>()),
                j.at("mono").get<std::vector<int>>());
        throw parse_error("unknown pair colouring kind: " + kind);
    } catch (const njson::exception& e) {
        throw parse_error(std::string("bad pair colouring document: ") + e.what());
    }
}

std::string homogeneous_answer_to_json(const dense_homogeneous_answer& a) {
    njson parts = njson::array();
    for (const auto& part : a.parts)
        parts.push_back(njson{{"left", part.left},
                              {"right", part.right},
                              {"value", part.value},
                              {"region", subtree(q_colouring_to_json(part.region))}});
    njson j{{"interval", interval_tree(a.window)},
            {"parts", std::move(parts)},
            {"colours", a.colours},
            {"colour", a.colour ? njson(*a.colour) : njson(nullptr)}};
    return j.dump();
}

}  // namespace ramq
