#include <doctest.h>

#include "ramq/rat.hpp"

using namespace ramq;

TEST_CASE("rationals reduce and normalize the sign") {
    rat q(6, -4);
    CHECK(q.num() == -3);
    CHECK(q.den() == 2);
    CHECK(rat(0, 7) == rat(0));
    CHECK(rat(-2, -6) == rat(1, 3));
    CHECK_THROWS_AS(rat(1, 0), domain_violation);
}

TEST_CASE("rational arithmetic is exact") {
    CHECK(rat(1, 2) + rat(1, 3) == rat(5, 6));
    CHECK(rat(1, 2) - rat(1, 3) == rat(1, 6));
    CHECK(rat(2, 3) * rat(9, 4) == rat(3, 2));
    CHECK(rat(1, 2) / rat(1, 3) == rat(3, 2));
    CHECK(-rat(3, 7) == rat(-3, 7));
    CHECK_THROWS_AS(rat(1) / rat(0), domain_violation);
    // Intermediates go through 128 bits; a result that cannot reduce back
    // into 64 bits is rejected instead of wrapping.
    rat fine(1, 3037000499LL);
    CHECK(fine * fine == rat(1, 9223372030926249001LL));
    CHECK_THROWS_AS(fine * fine * fine, domain_violation);
    CHECK(rat(4, 6) * rat(3, 2) == rat(1));
}

TEST_CASE("rational comparisons cross signs and denominators") {
    CHECK(rat(1, 3) < rat(1, 2));
    CHECK(rat(-1, 2) < rat(-1, 3));
    CHECK(rat(-1, 1000000) < rat(0));
    CHECK(rat(7, 2) > rat(3));
    CHECK(rat(2, 4) == rat(1, 2));
}

TEST_CASE("floor matches the mathematical definition") {
    CHECK(rat(7, 2).floor() == 3);
    CHECK(rat(-7, 2).floor() == -4);
    CHECK(rat(-4, 2).floor() == -2);
    CHECK(rat(0).floor() == 0);
    CHECK(rat(5).floor() == 5);
    CHECK(rat(-1, 3).floor() == -1);
}

TEST_CASE("parse and print round-trip") {
    CHECK(rat::parse("3/4") == rat(3, 4));
    CHECK(rat::parse("-3/4") == rat(-3, 4));
    CHECK(rat::parse("12") == rat(12));
    CHECK(rat::parse("6/4") == rat(3, 2));
    CHECK(rat(3, 4).str() == "3/4");
    CHECK(rat(-5).str() == "-5");
    CHECK(rat::parse(rat(-22, 7).str()) == rat(-22, 7));
    CHECK_THROWS_AS(rat::parse("a/b"), parse_error);
    CHECK_THROWS_AS(rat::parse("1/0"), parse_error);
    CHECK_THROWS_AS(rat::parse("1/-2"), parse_error);
    CHECK_THROWS_AS(rat::parse("1/2x"), parse_error);
}

TEST_CASE("pow2 covers both directions") {
    CHECK(pow2(0) == rat(1));
    CHECK(pow2(5) == rat(32));
    CHECK(pow2(-3) == rat(1, 8));
}

TEST_CASE("intervals are open and validated") {
    CHECK_THROWS_AS(interval(rat(1), rat(1)), domain_violation);
    CHECK_THROWS_AS(interval(rat(2), rat(1)), domain_violation);
    interval iv(rat(0), rat(1));
    CHECK(iv.contains(rat(1, 2)));
    CHECK_FALSE(iv.contains(rat(0)));
    CHECK_FALSE(iv.contains(rat(1)));
    CHECK(iv.width() == rat(1));
    CHECK(iv.mid() == rat(1, 2));
    CHECK(iv.contains(interval(rat(0), rat(1, 2))));
    CHECK_FALSE(interval(rat(0), rat(1, 2)).contains(iv));
}

TEST_CASE("interval intersection is the open overlap") {
    interval a(rat(0), rat(1)), b(rat(1, 2), rat(2));
    auto ab = intersect(a, b);
    REQUIRE(ab.has_value());
    CHECK(*ab == interval(rat(1, 2), rat(1)));
    CHECK_FALSE(intersect(a, interval(rat(1), rat(2))).has_value());
    CHECK_FALSE(intersect(a, interval(rat(3), rat(4))).has_value());
}
