#include <doctest.h>

#include "ramq/poset.hpp"
#include "ramq/semigroup.hpp"

using namespace ramq;

TEST_CASE("table validation") {
    CHECK_NOTHROW(finite_semigroup({{0, 0}, {1, 1}}));
    CHECK_THROWS_AS(finite_semigroup({{0, 1}, {0, 0}}), not_associative);
    CHECK_THROWS_AS(finite_semigroup({{0, 2}, {0, 0}}), bad_entry);
    CHECK_THROWS_AS(finite_semigroup({{0, 0}}), bad_entry);
    CHECK_NOTHROW(powerset_union(2));
}

TEST_CASE("named structures") {
    CHECK(left_zero(2).table() == std::vector<std::vector<int>>{{0, 0}, {1, 1}});
    finite_semigroup u = powerset_union(2);
    CHECK(u.mul(0, 1) == 1);
    CHECK(u.mul(1, 2) == 3);
    CHECK(u.mul(3, 1) == 3);
    finite_semigroup p = product(left_zero(2), cyclic(2));
    // (a, x) * (b, y) = (a, x + y mod 2) with (a, x) encoded as 2a + x.
    CHECK(p.mul(0, 3) == 1);
    CHECK(p.mul(3, 1) == 2 * 1 + 0);
    CHECK(p.mul(2, 2) == 2);
    CHECK(cyclic(1).size() == 1);
}

TEST_CASE("green structure of left zero semigroups") {
    green_data g = green_structure(left_zero(3));
    CHECK(g.classes_r.members.size() == 3);
    CHECK(g.classes_h.members.size() == 3);
    CHECK(g.classes_l.members.size() == 1);
    CHECK(g.classes_j.members.size() == 1);
    CHECK(g.idem_exponent == 1);
    for (int s = 0; s < 3; ++s) CHECK(g.omega_power[std::size_t(s)] == s);
}

TEST_CASE("green structure of the trivial semigroup") {
    green_data g = green_structure(cyclic(1));
    CHECK(g.leq_r[0][0]);
    CHECK(g.leq_l[0][0]);
    CHECK(g.leq_j[0][0]);
    CHECK(g.leq_h[0][0]);
    CHECK(g.idem_exponent == 1);
}

TEST_CASE("green structure of powerset union") {
    green_data g = green_structure(powerset_union(2));
    CHECK(g.classes_r.members.size() == 4);
    CHECK(g.classes_l.members.size() == 4);
    CHECK(g.classes_j.members.size() == 4);
    CHECK(g.classes_h.members.size() == 4);
    CHECK(g.idem_exponent == 1);
    // A is below B exactly when A contains B as a subset.
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            bool superset = (a & b) == b;
            CHECK(g.leq_r[std::size_t(a)][std::size_t(b)] == superset);
            CHECK(g.leq_l[std::size_t(a)][std::size_t(b)] == superset);
            CHECK(g.leq_j[std::size_t(a)][std::size_t(b)] == superset);
        }
}

TEST_CASE("idempotent exponent of cyclic groups is the order") {
    CHECK(green_structure(cyclic(6)).idem_exponent == 6);
    CHECK(green_structure(cyclic(5)).idem_exponent == 5);
    green_data g = green_structure(cyclic(6));
    for (int s = 0; s < 6; ++s) CHECK(g.omega_power[std::size_t(s)] == 0);
    CHECK(green_structure(cyclic(6)).classes_j.members.size() == 1);
}

TEST_CASE("omega power is idempotent everywhere") {
    for (const finite_semigroup& s :
         {left_zero(4), powerset_union(3), cyclic(6), product(left_zero(2), cyclic(3))}) {
        green_data g = green_structure(s);
        for (int x = 0; x < s.size(); ++x) {
            int w = g.omega_power[std::size_t(x)];
            CHECK(s.mul(w, w) == w);
            CHECK(w == s.pow(x, g.idem_exponent));
        }
    }
}

TEST_CASE("green lemma checks come back empty") {
    CHECK(check_green_lemmas(cyclic(3)).empty());
    CHECK(check_green_lemmas(left_zero(4)).empty());
    CHECK(check_green_lemmas(powerset_union(3)).empty());
    CHECK(check_green_lemmas(product(left_zero(2), cyclic(2))).empty());
    CHECK(check_green_lemmas(product(powerset_union(2), cyclic(3))).empty());
}

TEST_CASE("preorders are reflexive and transitive") {
    for (const finite_semigroup& s :
         {left_zero(3), powerset_union(2), cyclic(4), product(left_zero(2), left_zero(2))}) {
        green_data g = green_structure(s);
        for (const auto* rel : {&g.leq_r, &g.leq_l, &g.leq_j, &g.leq_h}) {
            int n = s.size();
            for (int a = 0; a < n; ++a) {
                CHECK((*rel)[std::size_t(a)][std::size_t(a)]);
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        if ((*rel)[std::size_t(a)][std::size_t(b)] &&
                            (*rel)[std::size_t(b)][std::size_t(c)])
                            CHECK((*rel)[std::size_t(a)][std::size_t(c)]);
            }
        }
        // H agrees with R-and-L, J contains R-or-L.
        for (int a = 0; a < s.size(); ++a)
            for (int b = 0; b < s.size(); ++b) {
                CHECK(g.leq_h[std::size_t(a)][std::size_t(b)] ==
                      (g.leq_r[std::size_t(a)][std::size_t(b)] &&
                       g.leq_l[std::size_t(a)][std::size_t(b)]));
                if (g.leq_r[std::size_t(a)][std::size_t(b)] ||
                    g.leq_l[std::size_t(a)][std::size_t(b)])
                    CHECK(g.leq_j[std::size_t(a)][std::size_t(b)]);
            }
    }
}

TEST_CASE("homomorphism validation") {
    semigroup_hom ident{cyclic(3), cyclic(3), {0, 1, 2}};
    CHECK_NOTHROW(validate_hom(ident));
    CHECK(apply_hom(ident, 2) == 2);

    semigroup_hom constant{powerset_union(2), cyclic(1), {0, 0, 0, 0}};
    CHECK_NOTHROW(validate_hom(constant));

    // Cardinality parity is not additive under union: {0} u {0} = {0}.
    semigroup_hom parity{powerset_union(2), cyclic(2), {0, 1, 1, 0}};
    CHECK_THROWS_AS(validate_hom(parity), not_homomorphism);
    try {
        validate_hom(parity);
    } catch (const not_homomorphism& e) {
        CHECK(e.a_ == 1);
        CHECK(e.b_ == 1);
    }

    semigroup_hom bad_size{cyclic(2), cyclic(2), {0}};
    CHECK_THROWS_AS(validate_hom(bad_size), bad_entry);
}

TEST_CASE("projection of elements onto their j classes") {
    auto [poset1, proj1] = j_order_poset(left_zero(3));
    CHECK(poset1.size() == 1);
    CHECK(proj1 == std::vector<int>{0, 0, 0});

    auto [poset2, proj2] = j_order_poset(powerset_union(2));
    CHECK(poset2.size() == 4);
    // Reverse inclusion: the full set is the bottom.
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(poset2.leq(proj2[std::size_t(a)], proj2[std::size_t(b)]) == ((a & b) == b));

    auto [poset3, proj3] = j_order_poset(cyclic(5));
    CHECK(poset3.size() == 1);

    // Monotone projection for a mixed product.
    finite_semigroup s = product(left_zero(2), powerset_union(2));
    green_data g = green_structure(s);
    auto [poset4, proj4] = j_order_poset(s);
    for (int a = 0; a < s.size(); ++a)
        for (int b = 0; b < s.size(); ++b)
            if (g.leq_j[std::size_t(a)][std::size_t(b)])
                CHECK(poset4.leq(proj4[std::size_t(a)], proj4[std::size_t(b)]));
}
