#include <catch2/catch_amalgamated.hpp>

#include "crnorm/series.hpp"
#include "helpers.hpp"

using namespace crnorm;
using namespace crnorm_test;

namespace {

const WeightProfile P2{2, 8};

Series Z1(WeightProfile p = P2) { return Series::variable(p, VZ1); }
Series Z2(WeightProfile p = P2) { return Series::variable(p, VZ2); }
Series ZB1(WeightProfile p = P2) { return Series::variable(p, VZB1); }
Series ZB2(WeightProfile p = P2) { return Series::variable(p, VZB2); }
Series S(WeightProfile p = P2) { return Series::variable(p, VX1, VarTag::S); }
Series W(WeightProfile p = P2) { return Series::variable(p, VX1, VarTag::W); }
Series one(WeightProfile p = P2) { return Series::constant(p, Scalar(1)); }

// Truncation-free multiply: run the product in a large-order profile, then
// map the result back and truncate. Independent of the production path.
Series dense_convolution_oracle(const Series& a, const Series& b) {
    WeightProfile big{a.profile().weight_w, 64};
    auto lift = [&](const Series& s) {
        Series r(big, s.tags());
        for (auto& [m, c] : s.terms()) r += Series::monomial(big, m, c, s.tags());
        return r;
    };
    Series prod = lift(a) * lift(b);
    Series back(a.profile(), prod.tags());
    for (auto& [m, c] : prod.terms())
        if (m.weighted_degree(a.profile()) <= a.profile().truncation_order)
            back += Series::monomial(a.profile(), m, c, prod.tags());
    return back;
}

} // namespace

TEST_CASE("series multiplication basics") {
    Series a = one() + Z1();
    Series b = one() - Z1();
    REQUIRE((a * b) == (one() - Z1() * Z1()));

    Series m = Z1() * ZB1() * S();
    REQUIRE(m.terms().size() == 1);
    REQUIRE(m.terms()[0].first.weighted_degree(P2) == 4);
}

TEST_CASE("series multiplication matches dense convolution oracle") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
        Series a = random_real_side_series(rng, P2);
        Series b = random_real_side_series(rng, P2);
        REQUIRE((a * b) == dense_convolution_oracle(a, b));
    }
}

TEST_CASE("ring axioms up to truncation") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        Series a = random_real_side_series(rng, P2, 8);
        Series b = random_real_side_series(rng, P2, 8);
        Series c = random_real_side_series(rng, P2, 8);
        REQUIRE(((a * b) * c) == (a * (b * c)));
        REQUIRE((a * (b + c)) == (a * b + a * c));
        REQUIRE((a + b) == (b + a));
    }
}

TEST_CASE("substitute w -> s + i z1 zb1") {
    Series f = W();
    Series target = S() + (Z1() * ZB1()).scaled(Scalar::i());
    REQUIRE(f.substitute(VX1, target) == target);

    Series f2 = W() * W();
    Series expect = S() * S() + (S() * Z1() * ZB1()).scaled(Scalar(2) * Scalar::i()) -
                    (Z1() * Z1() * ZB1() * ZB1());
    REQUIRE(f2.substitute(VX1, target) == expect);
}

TEST_CASE("substitute identity bindings") {
    std::mt19937_64 rng(4);
    Series f = random_real_side_series(rng, P2);
    std::map<int, Series> b;
    b.emplace(VZ1, Z1());
    b.emplace(VZB2, ZB2());
    REQUIRE(f.substitute(b) == f);
}

TEST_CASE("substitute is a ring homomorphism") {
    std::mt19937_64 rng(99);
    std::map<int, Series> b;
    b.emplace(VZ1, Z1() + Z2().scaled(Scalar::rational(1, 2)));
    b.emplace(VZB1, ZB1() + ZB2().scaled(Scalar::rational(1, 2)));
    b.emplace(VX1, S() + (Z1() * ZB1()).scaled(Scalar::i()));
    for (int trial = 0; trial < 8; ++trial) {
        Series x = random_real_side_series(rng, P2, 8);
        Series y = random_real_side_series(rng, P2, 8);
        Series lhs = (x * y).substitute(b);
        Series rhs = x.substitute(b) * y.substitute(b);
        // both sides only agree below the valid order of the substituted product
        int cap = std::min(lhs.valid_order(), rhs.valid_order());
        REQUIRE(lhs.truncate_above(cap) == rhs.truncate_above(cap));
    }
}

TEST_CASE("partial derivatives") {
    Series f = Z2() * ZB2() * ZB2();
    REQUIRE(f.partial_derivative(VZB2) == Z2().scaled(Scalar(2)) * ZB2());

    Series g = W() * W() * W();
    REQUIRE(g.partial_derivative(VX1, 2) == W().scaled(Scalar(6)));

    // second mixed derivative of z1^2 zb2 + zb1^2 z2 vanishes
    Series p3 = Z1() * Z1() * ZB2() + ZB1() * ZB1() * Z2();
    REQUIRE(p3.partial_derivative(VZ2).partial_derivative(VZB2).is_zero_series());
}

TEST_CASE("conjugation") {
    REQUIRE(Z1().scaled(Scalar::i()).conjugate() == ZB1().scaled(-Scalar::i()));
    std::mt19937_64 rng(31);
    Series f = random_real_side_series(rng, P2);
    REQUIRE(f.conjugate().conjugate() == f);

    // Heisenberg complex defining series: conjugation swaps the two faces.
    Series qbar = W() - (Z1() * ZB1()).scaled(Scalar(2) * Scalar::i());
    Series q = qbar.conjugate();
    Series tau = Series::variable(P2, VX1, VarTag::Tau);
    REQUIRE(q == tau + (Z1() * ZB1()).scaled(Scalar(2) * Scalar::i()));
    REQUIRE(q.tag(0) == VarTag::Tau);
}

TEST_CASE("type components partition the series") {
    Series f = Z1() * ZB1() + Z1() * Z1() * ZB2();
    REQUIRE(f.type_component(1, 1) == Z1() * ZB1());
    REQUIRE(f.type_component(3, 2).is_zero_series());

    std::mt19937_64 rng(8);
    Series g = random_real_side_series(rng, P2);
    Series sum(P2);
    for (int k = 0; k <= 8; ++k)
        for (int l = 0; l <= 8; ++l) sum += g.type_component(k, l);
    REQUIRE(sum == g);
}

TEST_CASE("weighted components partition the series") {
    Series f = Z1() * ZB1() + S() * S();
    REQUIRE(f.weighted_component(4) == S() * S());

    std::mt19937_64 rng(9);
    Series g = random_real_side_series(rng, P2);
    Series sum(P2);
    for (int nu = 0; nu <= 8; ++nu) sum += g.weighted_component(nu);
    REQUIRE(sum == g);
}

TEST_CASE("series inverse") {
    Series f = one() + Z1();
    Series inv = f.inverse();
    Series expect(P2);
    for (int k = 0; k <= 8; ++k)
        expect += Z1().pow(k).scaled(Scalar(k % 2 ? -1 : 1));
    REQUIRE(inv == expect);

    REQUIRE(Series::constant(P2, Scalar(2)).inverse() ==
            Series::constant(P2, Scalar::rational(1, 2)));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        Series u = one() + random_real_side_series(rng, P2, 6, 1);
        if (u.coeff(Monomial{}).is_exact_zero()) continue;
        REQUIRE((u * u.inverse()) == one());
    }
    REQUIRE_THROWS_AS(Z1().inverse(), std::domain_error);
}

TEST_CASE("series roots") {
    Series f = one() + Z1();
    Series r = f.root(2, Scalar(1));
    REQUIRE(r.coeff(make_mono(1, 0, 0, 0)) == Scalar::rational(1, 2));
    REQUIRE(r.coeff(make_mono(2, 0, 0, 0)) == Scalar::rational(-1, 8));
    REQUIRE((r * r) == f);

    // perfect square anchored at 2i
    Scalar two_i = Scalar(2) * Scalar::i();
    Series g = Series::constant(P2, two_i) + Z2();
    Series sq = g * g;
    REQUIRE(sq.root(2, two_i) == g);

    // cube root by recomposition
    std::mt19937_64 rng(13);
    Series v = random_real_side_series(rng, P2, 5, 1);
    Series base = one() + Z2().scaled(Scalar::rational(1, 3));
    Series cube = base.pow(3) + v;
    Series cr = cube.root(3, Scalar(1));
    REQUIRE(cr.pow(3) == cube);

    REQUIRE_THROWS_AS(Z1().root(2, Scalar(1)), std::domain_error);
    REQUIRE_THROWS_AS((one() + Z1()).root(2, Scalar(2)), std::domain_error);
}

TEST_CASE("reality test") {
    REQUIRE((Z1() * ZB1()).is_real_series());
    REQUIRE(!(Z1() * ZB1()).scaled(Scalar::i()).is_real_series());

    // model cubics are real
    Series m1 = Z2() * ZB2() * (Z2() + ZB2());
    Series m2 = Z1() * Z1() * ZB2() + ZB1() * ZB1() * Z2();
    Series m3 = Z2() * ZB2() * (Z1() + ZB1());
    REQUIRE(m1.is_real_series());
    REQUIRE(m2.is_real_series());
    REQUIRE(m3.is_real_series());
}

TEST_CASE("canonical text form") {
    Series f = (Z1() * ZB1()).scaled(Scalar::rational(3, 2)) +
               S().scaled(Scalar(Rational(0), Rational(-1)));
    REQUIRE(f.str() == "(3/2+0*i)*z1*zb1 + (0-1*i)*s");
    REQUIRE(Series(P2).str() == "0");
}

TEST_CASE("float backend identities at tolerance") {
    std::mt19937_64 rng(21);
    Series a = random_real_side_series(rng, P2);
    Series fa(P2, a.tags());
    for (auto& [m, c] : a.terms()) fa += Series::monomial(P2, m, Scalar::float_from(c), a.tags());
    Series u = one() + fa.weighted_component(2) + fa.weighted_component(3);
    REQUIRE(approx_equal_series(u * u.inverse(), one()));
}
