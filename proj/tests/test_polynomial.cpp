#include "liouville/errors.hpp"
#include "liouville/linalg.hpp"
#include "liouville/polynomial.hpp"

#include "random.hpp"

#include <doctest.h>

using namespace liouville;
using testing_support::random_polynomial;

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational(" -7 ") == Rational(-7));
    CHECK(parse_rational("+2/3") == Rational(2, 3));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("1/-2"));
    CHECK_THROWS(parse_rational("x"));
    CHECK_THROWS(parse_rational(""));
    CHECK(to_string(Rational(3, 4)) == "3/4");
    CHECK(to_short_string(Rational(4)) == "4");
}

TEST_CASE("long double conversion keeps more than double precision") {
    const Rational third(1, 3);
    const long double v = to_long_double(third);
    CHECK(std::fabs(v - 1.0L / 3.0L) <= 2 * std::numeric_limits<long double>::epsilon());
}

TEST_CASE("canonical form is lexicographic and drops zeros") {
    const int n = 2;
    Polynomial p = Polynomial::monomial(n, 2, {0, 1}) + Polynomial::monomial(n, -1, {2, 0}) +
                   Polynomial(n, Rational(1, 3));
    CHECK(p.to_canonical() == "[[1/3, 0, 0], [2, 0, 1], [-1, 2, 0]]");
    p -= Polynomial::monomial(n, 2, {0, 1});
    CHECK(p.to_canonical() == "[[1/3, 0, 0], [-1, 2, 0]]");
    CHECK(Polynomial(n).to_canonical() == "[]");
    CHECK(Polynomial(n).total_degree() == -1);
    CHECK(p.total_degree() == 2);
}

TEST_CASE("derivative of a monomial") {
    const Polynomial p = Polynomial::monomial(3, 5, {3, 1, 0});
    CHECK(p.derivative(0) == Polynomial::monomial(3, 15, {2, 1, 0}));
    CHECK(p.derivative(1) == Polynomial::monomial(3, 5, {3, 0, 0}));
    CHECK(p.derivative(2).is_zero());
}

TEST_CASE("variable count mismatches are rejected") {
    Polynomial a(2), b = Polynomial::variable(3, 0);
    CHECK_THROWS_AS(a += b, FrameMismatch);
    CHECK_THROWS_AS(Polynomial(kMaxVariables + 1), DomainError);
}

TEST_CASE("ring laws and Leibniz rule on random polynomials") {
    std::mt19937 rng(11);
    const int n = 3;
    for (int trial = 0; trial < 40; ++trial) {
        const Polynomial a = random_polynomial(rng, n, 3);
        const Polynomial b = random_polynomial(rng, n, 3);
        const Polynomial c = random_polynomial(rng, n, 3);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        for (int v = 0; v < n; ++v)
            CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
        // Mixed partials commute.
        CHECK(a.derivative(0).derivative(1) == a.derivative(1).derivative(0));
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    std::mt19937 rng(12);
    const int n = 2;
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial a = random_polynomial(rng, n, 3);
        const Polynomial b = random_polynomial(rng, n, 3);
        const std::vector<Rational> x{testing_support::random_rational(rng),
                                      testing_support::random_rational(rng)};
        CHECK((a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x));
        std::vector<long double> xf{to_long_double(x[0]), to_long_double(x[1])};
        CHECK(std::fabs(a.evaluate(xf) - to_long_double(a.evaluate(x))) < 1e-15L);
    }
}

TEST_CASE("rank and nullspace") {
    RationalMatrix m(3, 4);
    // Row 3 = row 1 + 2 row 2.
    const int rows[3][4] = {{1, 2, 0, 1}, {0, 1, 1, 0}, {1, 4, 2, 1}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = rows[r][c];
    CHECK(rank(m) == 2);
    const auto ns = nullspace(m);
    REQUIRE(ns.size() == 2);
    for (const auto& v : ns)
        for (int r = 0; r < 3; ++r) {
            Rational s = 0;
            for (int c = 0; c < 4; ++c) s += m(r, c) * v[c];
            CHECK(s == 0);
        }
    CHECK(in_column_space(m, {1, 1, 3}));
    CHECK_FALSE(in_column_space(m, {1, 1, 0}));
    CHECK(nullspace(RationalMatrix(0, 3)).size() == 3);
    CHECK(rank(hconcat(m, m)) == 2);
    CHECK(rank(vconcat(m, m)) == 2);
}

TEST_CASE("rank of random products is bounded by the factors") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        RationalMatrix a(4, 2), b(2, 5);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 2; ++c) a(r, c) = testing_support::random_rational(rng);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 5; ++c) b(r, c) = testing_support::random_rational(rng);
        const RationalMatrix ab = a * b;
        CHECK(rank(ab) <= std::min(rank(a), rank(b)));
        CHECK(rank(ab) + nullspace(ab).size() == 5);
    }
}
