#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "volrec/sympoly.hpp"

using namespace volrec;

namespace {

SymPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(0, 4), expd(0, 3), coeff(-6, 6),
        den(1, 5);
    SymPoly p;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        ExpVec e;
        int width = expd(rng) + 1;
        for (int j = 0; j < width; ++j) e.push_back(static_cast<uint16_t>(expd(rng)));
        p += SymPoly::monomial(Rat(coeff(rng), den(rng)), e);
    }
    return p;
}

}  // namespace

TEST_CASE("ring axioms hold on random polynomials") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 1200; ++trial) {
        SymPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        CHECK(a * SymPoly(1) == a);
        CHECK((a * SymPoly()).is_zero());
    }
}

TEST_CASE("zeta_even produces single P-monomials") {
    for (unsigned d = 1; d <= 12; ++d) {
        SymPoly z = zeta_even(d);
        REQUIRE(z.num_terms() == 1);
        const auto& t = z.terms()[0];
        REQUIRE(t.exp.size() == 1);
        CHECK(t.exp[0] == d);
    }
    CHECK(zeta_even(1) == Rat(1, 6) * SymPoly::generator(gen::P));
    CHECK(zeta_even(2) == Rat(1, 90) * SymPoly::generator(gen::P, 2));
    CHECK(zeta_even(3) == Rat(1, 945) * SymPoly::generator(gen::P, 3));
    CHECK_THROWS_AS(zeta_even(0), std::invalid_argument);
}

TEST_CASE("substitution and coefficient extraction") {
    SymPoly p = SymPoly::generator(gen::P) * SymPoly::generator(gen::S) +
                Rat(3) * SymPoly::generator(gen::Q, 2);
    CHECK(p.subst(gen::S, Rat(1)) ==
          SymPoly::generator(gen::P) + Rat(3) * SymPoly::generator(gen::Q, 2));
    CHECK(p.subst(gen::Q, Rat(0)) == SymPoly::generator(gen::P) * SymPoly::generator(gen::S));
    CHECK(p.coeff_of(gen::Q, 2) == SymPoly(3));
    CHECK(p.degree_in(gen::Q) == 2);
    SymPoly empty_subst = p.subst(gen::leg(1), Rat(5));
    CHECK(empty_subst == p);
}

TEST_CASE("numeric evaluation") {
    SymPoly p = SymPoly::generator(gen::P);
    CHECK(p.eval({{gen::P, 9.8696}}) == Catch::Approx(9.8696));
    SymPoly z2 = zeta_even(1);
    CHECK(z2.eval({{gen::P, M_PI * M_PI}}) == Catch::Approx(1.6449340668482264));
    CHECK(SymPoly().eval({}) == 0.0);
    CHECK_THROWS_AS(p.eval({}), std::invalid_argument);
}

TEST_CASE("json round trip is canonical") {
    SymPoly p = Rat(1, 48) * SymPoly::generator(gen::leg(1), 2) +
                Rat(1, 12) * SymPoly::generator(gen::P);
    auto j = p.to_json();
    CHECK(SymPoly::from_json(j) == p);
    CHECK(j.dump() == SymPoly::from_json(j).to_json().dump());
}

TEST_CASE("series reciprocal") {
    // (1 + x)^{-1} = 1 - x + x^2 - ...
    Series1 s = Series1::even({SymPoly(1), SymPoly(1), SymPoly(), SymPoly()});
    Series1 r = s.reciprocal();
    CHECK(r.coeffs[0] == SymPoly(1));
    CHECK(r.coeffs[1] == SymPoly(-1));
    CHECK(r.coeffs[2] == SymPoly(1));
    CHECK(r.coeffs[3] == SymPoly(-1));
    Series1 prod = s * r;
    CHECK(prod.coeffs[0] == SymPoly(1));
    for (size_t i = 1; i < prod.coeffs.size(); ++i) CHECK(prod.coeffs[i].is_zero());
}

TEST_CASE("mismatched series orders set the audit flag") {
    Series1 a = Series1::even({SymPoly(1), SymPoly(2)});
    Series1 b = Series1::even({SymPoly(1), SymPoly(3), SymPoly(4)});
    Series1 c = a * b;
    CHECK(c.order() == 2);
    CHECK(c.truncated_mismatch);
}
