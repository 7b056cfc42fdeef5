#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "volrec/models.hpp"

using namespace volrec;

namespace {
const SymPoly P = SymPoly::generator(gen::P);
const SymPoly S = SymPoly::generator(gen::S);
const SymPoly Q = SymPoly::generator(gen::Q);
}  // namespace

TEST_CASE("y-series anchors") {
    auto airy = model_y_series(make_model(ModelId::Airy), 4);
    CHECK(airy.coeffs[0] == SymPoly(1));
    CHECK(airy.coeffs[1].is_zero());
    CHECK(airy.coeffs[2].is_zero());

    auto wp = model_y_series(make_model(ModelId::WP), 2);
    CHECK(wp.coeffs[0] == SymPoly(1));
    CHECK(wp.coeffs[1] == Rat(-2, 3) * (P * S));

    auto mp = model_y_series(make_model(ModelId::MP), 2);
    CHECK(mp.coeffs[1] == Rat(-2, 3) * (P * S * (SymPoly(1) - Q)));

    auto swp = model_y_series(make_model(ModelId::SWP), 3);
    CHECK(swp.coeffs[0] == SymPoly(1));
    CHECK(swp.coeffs[1] == Rat(-2) * (P * S));

    auto smp = model_y_series(make_model(ModelId::SMP), 2);
    CHECK(smp.coeffs[1] == Rat(-2) * (P * S * (SymPoly(1) - Q)));

    CHECK_THROWS(model_y_series(make_model(ModelId::Airy), 0));
}

TEST_CASE("inverse series anchors") {
    auto airy = invert_y(make_model(ModelId::Airy), 5);
    CHECK(airy.s[0] == SymPoly(1));
    for (size_t l = 1; l < airy.s.size(); ++l) CHECK(airy.s[l].is_zero());

    auto wp = invert_y(make_model(ModelId::WP), 5);
    CHECK(wp.s[0] == SymPoly(1));
    CHECK(wp.s[1] == Rat(2, 3) * (P * S));

    auto bessel = invert_y(make_model(ModelId::Bessel), 5);
    CHECK(bessel.s[0] == SymPoly(1));
    for (size_t l = 1; l < bessel.s.size(); ++l) CHECK(bessel.s[l].is_zero());

    CHECK(invert_y(make_model(ModelId::SWP), 4).s[0] == SymPoly(1));
    CHECK(invert_y(make_model(ModelId::SMP), 4).s[0] == SymPoly(1));
}

TEST_CASE("y times 1/y is the identity series") {
    for (auto id : {ModelId::Airy, ModelId::WP, ModelId::MP, ModelId::Bessel,
                    ModelId::SWP, ModelId::SMP}) {
        ModelSpec m = make_model(id);
        const int N = 12;
        Series1 y = model_y_series(m, N);
        InvYSeries inv = invert_y(m, N);
        Series1 prod = Series1::even(y.coeffs) * Series1::even(inv.s);
        CHECK(prod.coeffs[0] == SymPoly(1));
        for (size_t k = 1; k < prod.coeffs.size(); ++k)
            CHECK(prod.coeffs[k].is_zero());
    }
}

TEST_CASE("shift anchors") {
    auto wp = model_shift(make_model(ModelId::WP), 4);
    CHECK(wp.at(2) == Rat(-2, 15) * (P * S));

    auto mp = model_shift(make_model(ModelId::MP), 4);
    CHECK(mp.at(2) == Rat(-2, 15) * (P * S * (SymPoly(1) - Q)));

    auto swp = model_shift(make_model(ModelId::SWP), 4);
    CHECK(swp.at(1) == Rat(-2, 3) * (P * S));

    CHECK(model_shift(make_model(ModelId::Airy), 4).empty());
    CHECK(model_shift(make_model(ModelId::Bessel), 4).empty());
}

TEST_CASE("shift vanishes beyond (p+1)/2 for numeric p") {
    for (long p : {3L, 5L, 7L}) {
        auto g = model_shift(make_minimal_string(p), 10);
        for (const auto& [a, v] : g) {
            CHECK(a <= (p + 1) / 2);
            CHECK(!v.is_zero());
        }
        auto gs = model_shift(make_minimal_superstring(p), 10);
        for (const auto& [a, v] : gs) CHECK(a <= (p - 1) / 2);
    }
}

TEST_CASE("partial fraction coefficients of 1/y at numeric p") {
    // s_l for M(p) at Q = 1/p^2, S = 1, P = pi^2 must match
    // s_0 = 1, s_l = -2 sum_j (-1)^j cos(pi j / p) / u_j^{2l}, u_j = p sin(pi j/p)/(2 pi).
    for (long p : {3L, 5L, 7L}) {
        InvYSeries inv = invert_y(make_minimal_string(p), 7);
        std::map<unsigned, double> assign{{gen::P, M_PI * M_PI}, {gen::S, 1.0}};
        for (int l = 0; l <= 6; ++l) {
            double expect = (l == 0) ? 1.0 : 0.0;
            if (l >= 1) {
                for (long j = 1; j <= (p - 1) / 2; ++j) {
                    double u = p * std::sin(M_PI * j / p) / (2 * M_PI);
                    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                    expect -= 2.0 * sgn * std::cos(M_PI * j / p) / std::pow(u, 2 * l);
                }
            }
            double got = inv.s[static_cast<size_t>(l)].eval(assign);
            CHECK(std::abs(got - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
        }
        // Super side: s'_l = -(1/pi) sum_j (-1)^j cos^2((j-1/2) pi/p) / u'_j^{2l+1}.
        InvYSeries sinv = invert_y(make_minimal_superstring(p), 7);
        for (int l = 0; l <= 6; ++l) {
            double expect = 0.0;
            for (long j = 1; j <= (p - 1) / 2; ++j) {
                double u = p * std::sin(M_PI * (j - 0.5) / p) / (2 * M_PI);
                double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                double c = std::cos(M_PI * (j - 0.5) / p);
                expect -= sgn * c * c / (M_PI * std::pow(u, 2 * l + 1));
            }
            double got = sinv.s[static_cast<size_t>(l)].eval(assign);
            CHECK(std::abs(got - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("specialize") {
    SymPoly v = P * S * (SymPoly(1) - Q);
    CHECK(specialize(v, {Rat(1), Rat(1)}).is_zero());          // Q -> 1 kills (1-Q)
    CHECK(specialize(v, {Rat(0), Rat(1)}) == P);               // Q -> 0, S -> 1
    CHECK(specialize(v, {std::nullopt, std::nullopt}) == v);   // identity
}

TEST_CASE("model selector parsing") {
    CHECK(parse_model("airy").id == ModelId::Airy);
    CHECK(parse_model("mp:sym").id == ModelId::MP);
    CHECK_FALSE(parse_model("mp:sym").q_value.has_value());
    CHECK(parse_model("mp:5").q_value == Rat(1, 25));
    CHECK(parse_model("smp:7").q_value == Rat(1, 49));
    CHECK_THROWS(parse_model("mp:4"));
    CHECK_THROWS(parse_model("nope"));
}
