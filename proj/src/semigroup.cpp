#include "ramq/semigroup.hpp"

#include <algorithm>

namespace ramq {

finite_semigroup::finite_semigroup(std::vector<std::vector<int>> table)
    : table_(std::move(table)) {
    int n = int(table_.size());
    if (n == 0) throw bad_entry("semigroup must be non-empty");
    for (const auto& row : table_) {
        if (int(row.size()) != n) throw bad_entry("semigroup table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw bad_entry("semigroup table entry out of range");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    throw not_associative(a, b, c);
}

int finite_semigroup::pow(int s, long long n) const {
    if (n < 1) throw domain_violation("semigroup power wants a positive exponent");
    int acc = s;
    for (long long i = 1; i < n; ++i) acc = mul(acc, s);
    return acc;
}

finite_semigroup left_zero(int n) {
    if (n <= 0) throw bad_entry("left_zero size must be positive");
    std::vector<std::vector<int>> t(std::size_t(n), std::vector<int>(std::size_t(n), 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[std::size_t(a)][std::size_t(b)] = a;
    return finite_semigroup(std::move(t));
}

finite_semigroup powerset_union(int k) {
    if (k <= 0) throw bad_entry("powerset_union exponent must be positive");
    if (k > 16) throw bad_entry("powerset_union exponent too large");
    int n = 1 << k;
    std::vector<std::vector<int>> t(std::size_t(n), std::vector<int>(std::size_t(n), 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[std::size_t(a)][std::size_t(b)] = a | b;
    return finite_semigroup(std::move(t));
}

finite_semigroup cyclic(int n) {
    if (n <= 0) throw bad_entry("cyclic order must be positive");
    std::vector<std::vector<int>> t(std::size_t(n), std::vector<int>(std::size_t(n), 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[std::size_t(a)][std::size_t(b)] = (a + b) % n;
    return finite_semigroup(std::move(t));
}

finite_semigroup product(const finite_semigroup& s1, const finite_semigroup& s2) {
    int n1 = s1.size(), n2 = s2.size();
    int n = n1 * n2;
    std::vector<std::vector<int>> t(std::size_t(n), std::vector<int>(std::size_t(n), 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int prod1 = s1.mul(a / n2, b / n2);
            int prod2 = s2.mul(a % n2, b % n2);
            t[std::size_t(a)][std::size_t(b)] = prod1 * n2 + prod2;
        }
    return finite_semigroup(std::move(t));
}

partition partition_from_equiv(int n, const std::vector<std::vector<bool>>& equiv) {
    partition p;
    p.class_of.assign(std::size_t(n), -1);
    for (int a = 0; a < n; ++a) {
        if (p.class_of[std::size_t(a)] != -1) continue;
        int id = int(p.members.size());
        p.members.emplace_back();
        for (int b = a; b < n; ++b)
            if (equiv[std::size_t(a)][std::size_t(b)]) {
                p.class_of[std::size_t(b)] = id;
                p.members.back().push_back(b);
            }
    }
    return p;
}

green_data green_structure(const finite_semigroup& s) {
    int n = s.size();
    green_data g;
    auto mat = [n] { return std::vector<std::vector<bool>>(std::size_t(n), std::vector<bool>(std::size_t(n), false)); };
    g.leq_r = mat();
    g.leq_l = mat();
    g.leq_j = mat();
    g.leq_h = mat();

    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            bool right = x == y, leftm = x == y, two_sided = x == y;
            for (int u = 0; u < n && !(right && leftm); ++u) {
                if (s.mul(y, u) == x) right = true;
                if (s.mul(u, y) == x) leftm = true;
            }
            for (int u = 0; u < n && !two_sided; ++u)
                for (int v = 0; v < n && !two_sided; ++v)
                    if (s.mul(s.mul(u, y), v) == x) two_sided = true;
            g.leq_r[std::size_t(x)][std::size_t(y)] = right;
            g.leq_l[std::size_t(x)][std::size_t(y)] = leftm;
            g.leq_h[std::size_t(x)][std::size_t(y)] = right && leftm;
            g.leq_j[std::size_t(x)][std::size_t(y)] = right || leftm || two_sided;
        }

    auto symmetrize = [n](const std::vector<std::vector<bool>>& leq) {
        std::vector<std::vector<bool>> eq(std::size_t(n), std::vector<bool>(std::size_t(n), false));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                eq[std::size_t(a)][std::size_t(b)] =
                    leq[std::size_t(a)][std::size_t(b)] && leq[std::size_t(b)][std::size_t(a)];
        return eq;
    };
    g.classes_r = partition_from_equiv(n, symmetrize(g.leq_r));
    g.classes_l = partition_from_equiv(n, symmetrize(g.leq_l));
    g.classes_j = partition_from_equiv(n, symmetrize(g.leq_j));
    g.classes_h = partition_from_equiv(n, symmetrize(g.leq_h));

    // Least exponent with every s^e idempotent; grows the powers in lockstep.
    std::vector<int> cur(std::size_t(n), 0);
    for (int x = 0; x < n; ++x) cur[std::size_t(x)] = x;
    int cap = n * n + 1;
    for (int e = 1; e <= cap; ++e) {
        bool all = true;
        for (int x = 0; x < n && all; ++x) {
            int p = cur[std::size_t(x)];
            all = s.mul(p, p) == p;
        }
        if (all) {
            g.idem_exponent = e;
            g.omega_power = cur;
            return g;
        }
        for (int x = 0; x < n; ++x) cur[std::size_t(x)] = s.mul(cur[std::size_t(x)], x);
    }
    throw law_violated("no common idempotent exponent within the size^2 cap");
}

std::vector<green_violation> check_green_lemmas(const finite_semigroup& s) {
    green_data g = green_structure(s);
    std::vector<green_violation> report;
    int n = s.size();

    // An H-class containing some product of two of its members is a group.
    for (const std::vector<int>& h : g.classes_h.members) {
        bool closed_somewhere = false;
        for (int a : h)
            for (int b : h)
                if (g.classes_h.class_of[std::size_t(s.mul(a, b))] ==
                    g.classes_h.class_of[std::size_t(a)])
                    closed_somewhere = true;
        if (!closed_somewhere) continue;
        std::vector<int> idems;
        for (int x : h)
            if (s.mul(x, x) == x) idems.push_back(x);
        if (idems.size() != 1) {
            report.push_back({"h-class-group",
                              "H-class of " + std::to_string(h[0]) + " has " +
                                  std::to_string(idems.size()) + " idempotents"});
            continue;
        }
        int e = idems[0];
        for (int a : h) {
            for (int b : h)
                if (g.classes_h.class_of[std::size_t(s.mul(a, b))] !=
                    g.classes_h.class_of[std::size_t(e)])
                    report.push_back({"h-class-group",
                                      "product " + std::to_string(a) + "*" +
                                          std::to_string(b) + " leaves the H-class"});
            if (s.mul(e, a) != a || s.mul(a, e) != a)
                report.push_back({"h-class-group",
                                  std::to_string(e) + " is not an identity for " +
                                      std::to_string(a)});
            bool has_inverse = false;
            for (int b : h)
                if (s.mul(a, b) == e && s.mul(b, a) == e) has_inverse = true;
            if (!has_inverse)
                report.push_back({"h-class-group",
                                  std::to_string(a) + " has no inverse for " +
                                      std::to_string(e)});
        }
    }

    // Below in the R-preorder and J-equivalent forces R-equivalent.
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (g.leq_r[std::size_t(x)][std::size_t(y)] && g.j_equiv(x, y) && !g.r_equiv(x, y))
                report.push_back({"leqR-J-implies-R",
                                  "(" + std::to_string(x) + "," + std::to_string(y) + ")"});

    // Below in the L-preorder and R-equivalent forces H-equivalent.
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (g.leq_l[std::size_t(x)][std::size_t(y)] && g.r_equiv(x, y) && !g.h_equiv(x, y))
                report.push_back({"leqL-R-implies-H",
                                  "(" + std::to_string(x) + "," + std::to_string(y) + ")"});

    return report;
}

int apply_hom(const semigroup_hom& h, int s) {
    if (s < 0 || s >= h.source.size()) throw domain_violation("hom applied out of range");
    return h.map[std::size_t(s)];
}

void validate_hom(const semigroup_hom& h) {
    if (int(h.map.size()) != h.source.size()) throw bad_entry("hom map has wrong size");
    for (int v : h.map)
        if (v < 0 || v >= h.target.size()) throw bad_entry("hom map value out of range");
    for (int a = 0; a < h.source.size(); ++a)
        for (int b = 0; b < h.source.size(); ++b)
            if (h.map[std::size_t(h.source.mul(a, b))] !=
                h.target.mul(h.map[std::size_t(a)], h.map[std::size_t(b)]))
                throw not_homomorphism(a, b);
}

}  // namespace ramq
