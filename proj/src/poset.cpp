#include "ramq/poset.hpp"

#include <string>

namespace ramq {

finite_poset::finite_poset(std::vector<std::vector<bool>> matrix) : leq_(std::move(matrix)) {
    int n = int(leq_.size());
    if (n == 0) throw bad_entry("poset must be non-empty");
    for (const auto& row : leq_)
        if (int(row.size()) != n) throw bad_entry("poset matrix is not square");
    for (int a = 0; a < n; ++a)
        if (!leq_[std::size_t(a)][std::size_t(a)]) throw bad_entry("poset not reflexive");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a != b && leq(a, b) && leq(b, a))
                throw bad_entry("poset not antisymmetric at (" + std::to_string(a) + "," +
                                std::to_string(b) + ")");
            if (!leq(a, b)) continue;
            for (int c = 0; c < n; ++c)
                if (leq(b, c) && !leq(a, c))
                    throw bad_entry("poset not transitive at (" + std::to_string(a) + "," +
                                    std::to_string(b) + "," + std::to_string(c) + ")");
        }
}

std::vector<int> finite_poset::linear_extension() const {
    int n = size();
    std::vector<bool> placed(std::size_t(n), false);
    std::vector<int> out;
    out.reserve(std::size_t(n));
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int a = 0; a < n && pick == -1; ++a) {
            if (placed[std::size_t(a)]) continue;
            bool ready = true;
            for (int b = 0; b < n && ready; ++b)
                if (!placed[std::size_t(b)] && strictly_less(b, a)) ready = false;
            if (ready) pick = a;
        }
        if (pick == -1) throw law_violated("poset linear extension found a cycle");
        placed[std::size_t(pick)] = true;
        out.push_back(pick);
    }
    return out;
}

std::vector<int> finite_poset::minimal_elements() const {
    std::vector<int> out;
    for (int a = 0; a < size(); ++a) {
        bool minimal = true;
        for (int b = 0; b < size() && minimal; ++b)
            if (strictly_less(b, a)) minimal = false;
        if (minimal) out.push_back(a);
    }
    return out;
}

finite_poset antichain(int n) {
    if (n <= 0) throw bad_entry("antichain size must be positive");
    std::vector<std::vector<bool>> leq(std::size_t(n), std::vector<bool>(std::size_t(n), false));
    for (int a = 0; a < n; ++a) leq[std::size_t(a)][std::size_t(a)] = true;
    return finite_poset(std::move(leq));
}

finite_poset chain_poset(const std::vector<int>& order) {
    int n = int(order.size());
    if (n == 0) throw bad_entry("chain must be non-empty");
    std::vector<int> rank(std::size_t(n), -1);
    for (int i = 0; i < n; ++i) {
        int e = order[std::size_t(i)];
        if (e < 0 || e >= n || rank[std::size_t(e)] != -1)
            throw bad_entry("chain order is not a permutation");
        rank[std::size_t(e)] = i;
    }
    std::vector<std::vector<bool>> leq(std::size_t(n), std::vector<bool>(std::size_t(n), false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            leq[std::size_t(a)][std::size_t(b)] = rank[std::size_t(a)] <= rank[std::size_t(b)];
    return finite_poset(std::move(leq));
}

finite_poset subset_poset(int k, bool reverse) {
    if (k <= 0 || k > 16) throw bad_entry("subset poset exponent out of range");
    int n = 1 << k;
    std::vector<std::vector<bool>> leq(std::size_t(n), std::vector<bool>(std::size_t(n), false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            bool incl = (a & b) == a;  // a subset of b
            leq[std::size_t(a)][std::size_t(b)] = reverse ? ((b & a) == b) : incl;
        }
    return finite_poset(std::move(leq));
}

finite_poset dual(const finite_poset& p) {
    int n = p.size();
    std::vector<std::vector<bool>> leq(std::size_t(n), std::vector<bool>(std::size_t(n), false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) leq[std::size_t(a)][std::size_t(b)] = p.leq(b, a);
    return finite_poset(std::move(leq));
}

finite_poset product(const finite_poset& p1, const finite_poset& p2) {
    int n1 = p1.size(), n2 = p2.size();
    int n = n1 * n2;
    std::vector<std::vector<bool>> leq(std::size_t(n), std::vector<bool>(std::size_t(n), false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            leq[std::size_t(a)][std::size_t(b)] =
                p1.leq(a / n2, b / n2) && p2.leq(a % n2, b % n2);
    return finite_poset(std::move(leq));
}

std::pair<finite_poset, std::vector<int>> j_order_poset(const finite_semigroup& s) {
    green_data g = green_structure(s);
    int m = int(g.classes_j.members.size());
    std::vector<std::vector<bool>> leq(std::size_t(m), std::vector<bool>(std::size_t(m), false));
    for (int ca = 0; ca < m; ++ca)
        for (int cb = 0; cb < m; ++cb) {
            int a = g.classes_j.members[std::size_t(ca)][0];
            int b = g.classes_j.members[std::size_t(cb)][0];
            leq[std::size_t(ca)][std::size_t(cb)] = g.leq_j[std::size_t(a)][std::size_t(b)];
        }
    return {finite_poset(std::move(leq)), g.classes_j.class_of};
}

}  // namespace ramq
