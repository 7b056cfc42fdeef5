/**
 * @file render.hpp
 * @brief Text / tex-like rendering of polynomials and tables in the paper's
 *        notation: P^k -> pi^{2k}, S^j -> s^j, Q^m -> p^{-2m}, l_i^a -> L_i^{2a}.
 *        Term order follows the canonical SymPoly ordering, so identical
 *        inputs render byte-identically.
 */
#pragma once

#include <sstream>

#include "abo.hpp"

namespace volrec {

enum class RenderStyle { text, tex };

inline std::string render_term(const SymPoly::Term& t, RenderStyle style) {
    std::ostringstream os;
    bool tex = style == RenderStyle::tex;
    std::vector<std::string> factors;
    BigInt num = t.coeff.num();
    BigInt den = t.coeff.den();
    for (size_t i = 0; i < t.exp.size(); ++i) {
        if (t.exp[i] == 0) continue;
        unsigned slot = static_cast<unsigned>(i);
        unsigned e = t.exp[i];
        std::ostringstream f;
        if (slot == gen::P) {
            f << (tex ? "\\pi^{" : "pi^") << 2 * e;
            if (tex) f << "}";
        } else if (slot == gen::S) {
            f << "s";
            if (e > 1) f << (tex ? "^{" : "^") << e << (tex ? "}" : "");
        } else if (slot == gen::Q) {
            f << (tex ? "p^{-" : "p^-") << 2 * e;
            if (tex) f << "}";
        } else {
            unsigned leg = slot - gen::LEG0 + 1;
            f << (tex ? "L_{" : "L") << leg << (tex ? "}" : "") << (tex ? "^{" : "^")
              << 2 * e;
            if (tex) f << "}";
        }
        factors.push_back(f.str());
    }
    std::string coeff;
    if (tex && den != 1) {
        coeff = "\\frac{" + num.str() + "}{" + den.str() + "}";
    } else {
        coeff = num.str();
        if (den != 1) coeff += "/" + den.str();
    }
    bool unit_coeff = (num == 1 && den == 1);
    std::vector<std::string> pieces;
    if (!unit_coeff || factors.empty()) pieces.push_back(coeff);
    pieces.insert(pieces.end(), factors.begin(), factors.end());
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i > 0) os << (tex ? " " : "*");
        os << pieces[i];
    }
    return os.str();
}

inline std::string render_poly(const SymPoly& p, RenderStyle style = RenderStyle::text) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        SymPoly::Term u = t;
        bool neg = u.coeff.sign() < 0;
        if (neg) u.coeff = -u.coeff;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        os << render_term(u, style);
        first = false;
    }
    return os.str();
}

inline std::string render_genfun_poly(const SymPoly& p) { return render_poly(p); }

}  // namespace volrec
