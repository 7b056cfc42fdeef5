/**
 * @file sympoly.hpp
 * @brief Sparse multivariate polynomials over Rat in the formal generators
 *        P (= pi^2), S (= s), Q (= 1/p^2) and squared boundary lengths
 *        l1, l2, ... (= L_i^2), plus one-variable formal series.
 *
 * Generator slots are global: 0 -> P, 1 -> S, 2 -> Q, 3+i -> l_{i+1}.
 * Terms are kept sorted lexicographically on the (zero-padded) exponent
 * vector, with no zero coefficients and no trailing zero exponents, so two
 * polynomials are equal iff their representations are equal and
 * serialization is deterministic.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rat.hpp"
#include <json.hpp>

namespace volrec {

namespace gen {
constexpr unsigned P = 0;  // pi^2
constexpr unsigned S = 1;  // deformation s
constexpr unsigned Q = 2;  // 1/p^2
constexpr unsigned LEG0 = 3;
inline unsigned leg(unsigned i) { return LEG0 + i - 1; }  // l_i, i >= 1

inline std::string name(unsigned slot) {
    switch (slot) {
        case P: return "P";
        case S: return "S";
        case Q: return "Q";
        default: return "l" + std::to_string(slot - LEG0 + 1);
    }
}
inline std::optional<unsigned> slot_of(const std::string& name) {
    if (name == "P") return P;
    if (name == "S") return S;
    if (name == "Q") return Q;
    if (name.size() >= 2 && name[0] == 'l') {
        unsigned i = std::stoul(name.substr(1));
        if (i >= 1) return leg(i);
    }
    return std::nullopt;
}
}  // namespace gen

using ExpVec = std::vector<uint16_t>;  // trailing zeros trimmed

inline void trim_exp(ExpVec& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

inline bool exp_less(const ExpVec& a, const ExpVec& b) {
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        uint16_t ai = i < a.size() ? a[i] : 0;
        uint16_t bi = i < b.size() ? b[i] : 0;
        if (ai != bi) return ai < bi;
    }
    return false;
}

class SymPoly {
public:
    struct Term {
        ExpVec exp;
        Rat coeff;
    };

    SymPoly() = default;
    explicit SymPoly(const Rat& c) {
        if (!c.is_zero()) terms_.push_back({{}, c});
    }
    SymPoly(long n) : SymPoly(Rat(n)) {}

    static SymPoly generator(unsigned slot, unsigned power = 1) {
        SymPoly p;
        if (power == 0) return SymPoly(Rat(1));
        ExpVec e(slot + 1, 0);
        e[slot] = static_cast<uint16_t>(power);
        p.terms_.push_back({std::move(e), Rat(1)});
        return p;
    }

    static SymPoly monomial(const Rat& c, ExpVec e) {
        SymPoly p;
        if (c.is_zero()) return p;
        trim_exp(e);
        p.terms_.push_back({std::move(e), c});
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.empty());
    }
    Rat constant_term() const {
        if (!terms_.empty() && terms_[0].exp.empty()) return terms_[0].coeff;
        return Rat(0);
    }
    size_t num_terms() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    friend bool operator==(const SymPoly& a, const SymPoly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].exp != b.terms_[i].exp ||
                a.terms_[i].coeff != b.terms_[i].coeff)
                return false;
        return true;
    }
    friend bool operator!=(const SymPoly& a, const SymPoly& b) { return !(a == b); }

    SymPoly& operator+=(const SymPoly& o) { return merge(o, false); }
    SymPoly& operator-=(const SymPoly& o) { return merge(o, true); }

    friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
    friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }

    SymPoly operator-() const {
        SymPoly r = *this;
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    friend SymPoly operator*(const SymPoly& a, const SymPoly& b) {
        if (a.is_zero() || b.is_zero()) return SymPoly();
        std::map<ExpVec, Rat, decltype(&exp_less)> acc(&exp_less);
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                ExpVec e(std::max(ta.exp.size(), tb.exp.size()), 0);
                for (size_t i = 0; i < ta.exp.size(); ++i) e[i] += ta.exp[i];
                for (size_t i = 0; i < tb.exp.size(); ++i) e[i] += tb.exp[i];
                trim_exp(e);
                acc[e] += ta.coeff * tb.coeff;
            }
        return from_map(acc);
    }
    SymPoly& operator*=(const SymPoly& o) { return *this = *this * o; }

    SymPoly& scale(const Rat& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& t : terms_) t.coeff *= c;
        return *this;
    }
    friend SymPoly operator*(const Rat& c, SymPoly p) { return p.scale(c); }
    friend SymPoly operator*(SymPoly p, const Rat& c) { return p.scale(c); }

    /// Substitute a generator by an exact rational value.
    SymPoly subst(unsigned slot, const Rat& value) const {
        std::map<ExpVec, Rat, decltype(&exp_less)> acc(&exp_less);
        for (const auto& t : terms_) {
            unsigned pow = slot < t.exp.size() ? t.exp[slot] : 0;
            Rat c = t.coeff;
            for (unsigned i = 0; i < pow; ++i) c *= value;
            if (c.is_zero()) continue;
            ExpVec e = t.exp;
            if (slot < e.size()) e[slot] = 0;
            trim_exp(e);
            acc[e] += c;
        }
        return from_map(acc);
    }

    /// Substitute a generator by a polynomial.
    SymPoly subst(unsigned slot, const SymPoly& value) const {
        SymPoly out;
        for (const auto& t : terms_) {
            unsigned pow = slot < t.exp.size() ? t.exp[slot] : 0;
            ExpVec e = t.exp;
            if (slot < e.size()) e[slot] = 0;
            trim_exp(e);
            SymPoly piece = SymPoly::monomial(t.coeff, e);
            for (unsigned i = 0; i < pow; ++i) piece *= value;
            out += piece;
        }
        return out;
    }

    /// Exact coefficient extraction: coefficient of slot^power as a polynomial
    /// in the remaining generators.
    SymPoly coeff_of(unsigned slot, unsigned power) const {
        SymPoly out;
        for (const auto& t : terms_) {
            unsigned pow = slot < t.exp.size() ? t.exp[slot] : 0;
            if (pow != power) continue;
            ExpVec e = t.exp;
            if (slot < e.size()) e[slot] = 0;
            trim_exp(e);
            out += SymPoly::monomial(t.coeff, e);
        }
        return out;
    }

    unsigned degree_in(unsigned slot) const {
        unsigned d = 0;
        for (const auto& t : terms_)
            if (slot < t.exp.size()) d = std::max<unsigned>(d, t.exp[slot]);
        return d;
    }

    unsigned max_slot_plus_one() const {
        size_t m = 0;
        for (const auto& t : terms_) m = std::max(m, t.exp.size());
        return static_cast<unsigned>(m);
    }

    /// Floating evaluation. Every generator present must be assigned.
    double eval(const std::map<unsigned, double>& assignment) const {
        double acc = 0.0;
        for (const auto& t : terms_) {
            double m = t.coeff.to_double();
            for (size_t i = 0; i < t.exp.size(); ++i) {
                if (t.exp[i] == 0) continue;
                auto it = assignment.find(static_cast<unsigned>(i));
                if (it == assignment.end())
                    throw std::invalid_argument("SymPoly::eval: generator " +
                                                gen::name(static_cast<unsigned>(i)) +
                                                " not assigned");
                for (unsigned k = 0; k < t.exp[i]; ++k) m *= it->second;
            }
            acc += m;
        }
        return acc;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : terms_) {
            nlohmann::json e = nlohmann::json::object();
            for (size_t i = 0; i < t.exp.size(); ++i)
                if (t.exp[i] != 0)
                    e[gen::name(static_cast<unsigned>(i))] = t.exp[i];
            arr.push_back({{"exp", e},
                           {"num", t.coeff.num().str()},
                           {"den", t.coeff.den().str()}});
        }
        return nlohmann::json{{"terms", arr}};
    }

    static SymPoly from_json(const nlohmann::json& j) {
        SymPoly out;
        for (const auto& item : j.at("terms")) {
            ExpVec e;
            for (auto it = item.at("exp").begin(); it != item.at("exp").end(); ++it) {
                auto slot = gen::slot_of(it.key());
                if (!slot) throw std::invalid_argument("unknown generator " + it.key());
                if (e.size() <= *slot) e.resize(*slot + 1, 0);
                e[*slot] = static_cast<uint16_t>(it.value().get<unsigned>());
            }
            Rat c(BigInt(item.at("num").get<std::string>()),
                  BigInt(item.at("den").get<std::string>()));
            out += SymPoly::monomial(c, e);
        }
        return out;
    }

private:
    std::vector<Term> terms_;

    template <class Map>
    static SymPoly from_map(const Map& acc) {
        SymPoly p;
        p.terms_.reserve(acc.size());
        for (const auto& [e, c] : acc)
            if (!c.is_zero()) p.terms_.push_back({e, c});
        return p;
    }

    SymPoly& merge(const SymPoly& o, bool negate) {
        std::map<ExpVec, Rat, decltype(&exp_less)> acc(&exp_less);
        for (const auto& t : terms_) acc[t.exp] = t.coeff;
        for (const auto& t : o.terms_) {
            auto& slot = acc[t.exp];
            slot = negate ? slot - t.coeff : slot + t.coeff;
        }
        *this = from_map(acc);
        return *this;
    }
};

/// zeta(2d) as an exact P-monomial: (-1)^{d+1} B_{2d} (2 pi)^{2d} / (2 (2d)!).
inline SymPoly zeta_even(unsigned d) {
    if (d == 0) throw std::invalid_argument("zeta_even: d must be >= 1");
    Rat c = bernoulli(2 * d);
    if (d % 2 == 0) c = -c;
    BigInt two_pow = BigInt(1) << (2 * d);  // (2 pi)^{2d} = 2^{2d} P^d
    c *= Rat(two_pow, 2 * factorial(2 * d));
    ExpVec e{static_cast<uint16_t>(d)};
    return SymPoly::monomial(c, e);
}

/**
 * One-variable formal series with fixed parity.
 *
 * coeffs[k] is the coefficient of z^{2k+1} (parity odd, used for y(z) of the
 * bosonic models and 1/y of the super models after shifting by z^{+-1}) or of
 * z^{2k} (parity even, used for the auxiliary series in x = z^2). Order =
 * coeffs.size(). Arithmetic on mismatched orders truncates to the shorter
 * operand and sets the truncated flag on the result.
 */
struct Series1 {
    enum class Parity { even, odd };
    Parity parity = Parity::even;
    std::vector<SymPoly> coeffs;
    bool truncated_mismatch = false;

    size_t order() const { return coeffs.size(); }

    static Series1 even(std::vector<SymPoly> c) {
        return Series1{Parity::even, std::move(c), false};
    }

    friend Series1 operator*(const Series1& a, const Series1& b) {
        if (a.parity != Series1::Parity::even || b.parity != Series1::Parity::even)
            throw std::invalid_argument("Series1: product defined on even series");
        size_t n = std::min(a.order(), b.order());
        Series1 r;
        r.parity = Series1::Parity::even;
        r.truncated_mismatch = a.truncated_mismatch || b.truncated_mismatch ||
                               (a.order() != b.order());
        r.coeffs.assign(n, SymPoly());
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; i + j < n && j < b.order(); ++j)
                r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
        return r;
    }

    /// Reciprocal of an even series with unit leading coefficient.
    Series1 reciprocal() const {
        if (parity != Parity::even)
            throw std::invalid_argument("Series1::reciprocal: even series required");
        if (coeffs.empty() || coeffs[0] != SymPoly(1))
            throw std::invalid_argument("Series1::reciprocal: leading coefficient must be 1");
        Series1 r;
        r.parity = Parity::even;
        r.coeffs.assign(order(), SymPoly());
        r.coeffs[0] = SymPoly(1);
        for (size_t k = 1; k < order(); ++k) {
            SymPoly acc;
            for (size_t j = 1; j <= k; ++j) acc += coeffs[j] * r.coeffs[k - j];
            r.coeffs[k] = -acc;
        }
        return r;
    }
};

}  // namespace volrec
