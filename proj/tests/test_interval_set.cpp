#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "octaflow/interval_set.hpp"
#include "octaflow/rng.hpp"
#include "support/oracles.hpp"

using namespace octaflow;

TEST_CASE("normalize merges adjacent and overlapping intervals") {
    auto s = IntervalSet::normalize({{0.0, 1.0}, {1.0, 2.0}});
    REQUIRE(s.size() == 1);
    CHECK(s.intervals()[0].u == 0.0);
    CHECK(s.intervals()[0].v == 2.0);

    s = IntervalSet::normalize({{0.0, 2.0}, {1.0, 3.0}});
    REQUIRE(s.size() == 1);
    CHECK(s.intervals()[0].v == 3.0);
    CHECK(s.total_measure() == doctest::Approx(3.0).epsilon(1e-15));

    const auto empty = IntervalSet::normalize({});
    CHECK(empty.empty());
    CHECK(empty.total_measure() == 0.0);
}

TEST_CASE("normalize rejects u >= v") {
    CHECK_THROWS_AS(IntervalSet::normalize({{1.0, 1.0}}), DegenerateInputError);
    CHECK_THROWS_AS(IntervalSet::normalize({{2.0, 1.0}}), DegenerateInputError);
}

TEST_CASE("restrict") {
    const auto s = IntervalSet::normalize({{0.0, 5.0}});
    CHECK(s.restrict(3.0).total_measure() == doctest::Approx(3.0));
    CHECK(IntervalSet::normalize({{4.0, 5.0}}).restrict(3.0).empty());
    const auto r = IntervalSet::normalize({{2.0, 4.0}}).restrict(3.0);
    REQUIRE(r.size() == 1);
    CHECK(r.intervals()[0].u == 2.0);
    CHECK(r.intervals()[0].v == 3.0);
    CHECK(r.total_measure() == doctest::Approx(1.0));
}

TEST_CASE("normalize is idempotent; measure additive; restrict composes") {
    Rng rng(5);
    for (int it = 0; it < 200; ++it) {
        const auto s = testing::random_interval_set(rng, 12, 10.0);
        const auto s2 = IntervalSet::normalize(
            std::vector<Interval>(s.intervals().begin(), s.intervals().end()));
        REQUIRE(s2.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s2.intervals()[i].u == s.intervals()[i].u);
            CHECK(s2.intervals()[i].v == s.intervals()[i].v);
        }
        double sum = 0.0;
        for (const auto& iv : s.intervals()) sum += iv.v - iv.u;
        CHECK(s.total_measure() == doctest::Approx(sum).epsilon(1e-12));

        const double n = rng.uniform(0.5, 10.0), m = rng.uniform(0.5, 10.0);
        const auto a = s.restrict(n).restrict(m);
        const auto b = s.restrict(std::min(n, m));
        CHECK(a.total_measure() == doctest::Approx(b.total_measure()).epsilon(1e-12));
    }
}

TEST_CASE("density") {
    CHECK(density(IntervalSet::full(4.0), 4.0) == doctest::Approx(1.0));
    CHECK(density(IntervalSet::normalize({{0.0, 1.0}, {2.0, 3.0}}), 4.0) ==
          doctest::Approx(0.5));
    CHECK(density(IntervalSet::normalize({{0.0, 1.0}}), 0.5) == doctest::Approx(1.0));
}

TEST_CASE("CSV round trip") {
    const auto s = IntervalSet::normalize({{0.25, 1.5}, {2.0, 2.125}});
    std::stringstream ss;
    s.write_csv(ss);
    const auto back = IntervalSet::read_csv(ss);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.intervals()[i].u == s.intervals()[i].u);
        CHECK(back.intervals()[i].v == s.intervals()[i].v);
    }
}

TEST_CASE("exact rational endpoints survive normalize / restrict / scale") {
    auto s = IntervalSet::normalize_exact(
        {{Rational(0), Rational(1, 3)}, {Rational(1, 3), Rational(1, 2)}, {Rational(2), Rational(3)}});
    REQUIRE(s.has_exact());
    REQUIRE(s.size() == 2);  // the first two merge exactly at 1/3
    CHECK(s.exact()[0].v == Rational(1, 2));

    const auto r = s.restrict(2.5);  // non-integer n drops exactness
    CHECK_FALSE(r.has_exact());

    const auto ri = s.restrict(1.0);
    REQUIRE(ri.has_exact());
    CHECK(ri.exact()[0].v == Rational(1, 2));

    const auto sc = s.scale_down(4.0);
    REQUIRE(sc.has_exact());
    CHECK(sc.exact()[0].v == Rational(1, 8));
}

TEST_CASE("JSON round trip keeps rational endpoints exact") {
    const auto s = IntervalSet::normalize_exact(
        {{Rational(1, 3), Rational(1, 2)}, {Rational(2, 3), Rational(7, 8)}});
    const auto back = IntervalSet::from_json(s.to_json());
    REQUIRE(back.has_exact());
    CHECK(back.exact()[0].u == Rational(1, 3));
    CHECK(back.exact()[1].v == Rational(7, 8));

    // Plain numbers load as doubles.
    const auto d = IntervalSet::from_json(R"({"intervals": [[0.25, 0.75]]})");
    CHECK_FALSE(d.has_exact());
    CHECK(d.total_measure() == doctest::Approx(0.5));

    CHECK_THROWS_AS(IntervalSet::from_json(R"({"nope": 1})"), InvalidParameterError);
}

TEST_CASE("set_union") {
    const auto a = IntervalSet::normalize({{0.0, 1.0}});
    const auto b = IntervalSet::normalize({{0.5, 2.0}, {3.0, 4.0}});
    const auto u = IntervalSet::set_union(a, b);
    REQUIRE(u.size() == 2);
    CHECK(u.total_measure() == doctest::Approx(3.0));
}
