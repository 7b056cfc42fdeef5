/**
 * @file models.hpp
 * @brief Registry of the 2D gravity spectral-curve models on x = z^2/2 and
 *        the data derived from their y-coordinate: y-series, inverse series
 *        s_l / s'_l, and the t-variable shifts gamma_a.
 *
 * Bosonic models expand y(z) = sum_{a>=1} c_a z^{2a-1} with c_1 = 1; super
 * models expand y(z) = sum_{a>=0} c_a z^{2a-1} with c_0 = 1 (leading 1/z).
 * pi^2 enters as generator P, the kappa-deformation s as S and 1/p^2 as Q,
 * so every coefficient stays exact; numeric odd p is the substitution
 * Q -> 1/p^2.
 */
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sympoly.hpp"

namespace volrec {

enum class ModelId { Airy, WP, MP, Bessel, SWP, SMP, KdV, BGW };

inline bool model_is_super(ModelId id) {
    return id == ModelId::Bessel || id == ModelId::SWP || id == ModelId::SMP ||
           id == ModelId::BGW;
}

struct ModelSpec {
    ModelId id = ModelId::Airy;
    bool super = false;
    bool carries_s = false;
    // Numeric specialization Q -> 1/p^2 for M(p)/SM(p); nullopt keeps Q formal.
    std::optional<Rat> q_value;
    // KdV: times[a] = u_{2a-1} for a >= 2; BGW: times[a] = v_{2a-1} for a >= 1.
    std::map<int, SymPoly> custom_times;

    std::string name() const {
        switch (id) {
            case ModelId::Airy: return "airy";
            case ModelId::WP: return "wp";
            case ModelId::MP: return q_value ? "mp:p" : "mp:sym";
            case ModelId::Bessel: return "bessel";
            case ModelId::SWP: return "swp";
            case ModelId::SMP: return q_value ? "smp:p" : "smp:sym";
            case ModelId::KdV: return "kdv";
            case ModelId::BGW: return "bgw";
        }
        return "?";
    }
};

inline ModelSpec make_model(ModelId id) {
    ModelSpec m;
    m.id = id;
    m.super = model_is_super(id);
    m.carries_s = (id == ModelId::WP || id == ModelId::MP || id == ModelId::SWP ||
                   id == ModelId::SMP);
    return m;
}

inline ModelSpec make_minimal_string(long p) {
    if (p < 1 || p % 2 == 0)
        throw std::invalid_argument("minimal string requires positive odd p");
    ModelSpec m = make_model(ModelId::MP);
    m.q_value = Rat(1, p * p);
    return m;
}

inline ModelSpec make_minimal_superstring(long p) {
    if (p < 1 || p % 2 == 0)
        throw std::invalid_argument("minimal superstring requires positive odd p");
    ModelSpec m = make_model(ModelId::SMP);
    m.q_value = Rat(1, p * p);
    return m;
}

struct InvYSeries {
    bool super = false;
    std::vector<SymPoly> s;  // s_l (bosonic: 1/y = sum s_l z^{2l-1}) or s'_l
    const SymPoly& at(int l) const {
        static const SymPoly zero;
        if (l < 0) return zero;
        if (static_cast<size_t>(l) >= s.size())
            throw std::out_of_range("InvYSeries: coefficient s_" + std::to_string(l) +
                                    " beyond truncation order " +
                                    std::to_string(s.size()));
        return s[static_cast<size_t>(l)];
    }
    size_t order() const { return s.size(); }
};

namespace detail {

// Product prod_{i=1}^{m} (1 - (2i-1)^2 Q).
inline SymPoly q_product(int m) {
    SymPoly r(1);
    for (int i = 1; i <= m; ++i) {
        long odd = 2L * i - 1;
        r *= SymPoly(1) - Rat(odd * odd) * SymPoly::generator(gen::Q);
    }
    return r;
}

// (-2 P S)^k.
inline SymPoly neg_two_ps_pow(int k) {
    SymPoly r(1);
    SymPoly ps = Rat(-2) * (SymPoly::generator(gen::P) * SymPoly::generator(gen::S));
    for (int i = 0; i < k; ++i) r *= ps;
    return r;
}

}  // namespace detail

/**
 * y-series of a model. For bosonic models coeffs[k] is the coefficient of
 * z^{2k+1} (k = a-1); for super models coeffs[k] is the coefficient of
 * z^{2k-1} (k = a). The series carries parity odd.
 */
inline Series1 model_y_series(const ModelSpec& m, int order) {
    if (order < 1) throw std::invalid_argument("model_y_series: order >= 1 required");
    std::vector<SymPoly> c(static_cast<size_t>(order));
    if (!m.super) {
        for (int a = 1; a <= order; ++a) {
            SymPoly v;
            switch (m.id) {
                case ModelId::Airy:
                    v = (a == 1) ? SymPoly(1) : SymPoly();
                    break;
                case ModelId::WP:
                    v = detail::neg_two_ps_pow(a - 1);
                    v.scale(Rat(1, 1) / Rat(double_factorial(2 * a - 1) * factorial(a - 1)));
                    break;
                case ModelId::MP:
                    v = detail::neg_two_ps_pow(a - 1) * detail::q_product(a - 1);
                    v.scale(Rat(1, 1) / Rat(double_factorial(2 * a - 1) * factorial(a - 1)));
                    break;
                case ModelId::KdV: {
                    if (a == 1) v = SymPoly(1);
                    else if (auto it = m.custom_times.find(a); it != m.custom_times.end())
                        v = it->second;
                    break;
                }
                default:
                    throw std::invalid_argument("model_y_series: not a bosonic model");
            }
            c[static_cast<size_t>(a - 1)] = v;
        }
    } else {
        for (int a = 0; a < order; ++a) {
            SymPoly v;
            switch (m.id) {
                case ModelId::Bessel:
                    v = (a == 0) ? SymPoly(1) : SymPoly();
                    break;
                case ModelId::SWP:
                    v = detail::neg_two_ps_pow(a);
                    v.scale(Rat(1, 1) / Rat(double_factorial(2 * a - 1) * factorial(a)));
                    break;
                case ModelId::SMP:
                    v = detail::neg_two_ps_pow(a) * detail::q_product(a);
                    v.scale(Rat(1, 1) / Rat(double_factorial(2 * a - 1) * factorial(a)));
                    break;
                case ModelId::BGW: {
                    if (a == 0) v = SymPoly(1);
                    else if (auto it = m.custom_times.find(a); it != m.custom_times.end())
                        v = it->second;
                    break;
                }
                default:
                    throw std::invalid_argument("model_y_series: not a super model");
            }
            c[static_cast<size_t>(a)] = v;
        }
    }
    if (m.q_value)
        for (auto& v : c) v = v.subst(gen::Q, *m.q_value);
    Series1 s;
    s.parity = Series1::Parity::odd;
    s.coeffs = std::move(c);
    return s;
}

/**
 * Inverse series of y. Bosonic: 1/y = sum_{l>=0} s_l z^{2l-1}; super:
 * 1/y = sum_{l>=0} s'_l z^{2l+1}. Both are the reciprocal of the even series
 * sum_k c_k x^k in x = z^2.
 */
inline InvYSeries invert_y(const ModelSpec& m, int order) {
    Series1 y = model_y_series(m, order);
    if (y.coeffs.empty() || y.coeffs[0] != SymPoly(1))
        throw std::invalid_argument("invert_y: leading y coefficient must be 1");
    Series1 even = Series1::even(y.coeffs);
    Series1 rec = even.reciprocal();
    InvYSeries inv;
    inv.super = m.super;
    inv.s = std::move(rec.coeffs);
    return inv;
}

/**
 * t-variable shifts gamma_a (t_a -> t_a - gamma_a maps the Airy resp. Bessel
 * generating function to the model's). Bosonic entries start at a = 2, super
 * entries at a = 1.
 */
inline std::map<int, SymPoly> model_shift(const ModelSpec& m, int a_max) {
    std::map<int, SymPoly> g;
    if (!m.super) {
        for (int a = 2; a <= a_max; ++a) {
            SymPoly v;
            switch (m.id) {
                case ModelId::Airy: break;
                case ModelId::WP:
                    v = detail::neg_two_ps_pow(a - 1);
                    v.scale(Rat(1) / Rat(double_factorial(2 * a + 1) * factorial(a - 1)));
                    break;
                case ModelId::MP:
                    v = detail::neg_two_ps_pow(a - 1) * detail::q_product(a - 1);
                    v.scale(Rat(1) / Rat(double_factorial(2 * a + 1) * factorial(a - 1)));
                    break;
                case ModelId::KdV:
                    if (auto it = m.custom_times.find(a); it != m.custom_times.end())
                        v = Rat(1, 2 * a + 1) * it->second;
                    break;
                default:
                    throw std::invalid_argument("model_shift: not a bosonic model");
            }
            if (!v.is_zero()) g[a] = v;
        }
    } else {
        for (int a = 1; a <= a_max; ++a) {
            SymPoly v;
            switch (m.id) {
                case ModelId::Bessel: break;
                case ModelId::SWP:
                    v = detail::neg_two_ps_pow(a);
                    v.scale(Rat(1) / Rat(double_factorial(2 * a + 1) * factorial(a)));
                    break;
                case ModelId::SMP:
                    v = detail::neg_two_ps_pow(a) * detail::q_product(a);
                    v.scale(Rat(1) / Rat(double_factorial(2 * a + 1) * factorial(a)));
                    break;
                case ModelId::BGW:
                    if (auto it = m.custom_times.find(a); it != m.custom_times.end())
                        v = Rat(1, 2 * a + 1) * it->second;
                    break;
                default:
                    throw std::invalid_argument("model_shift: not a super model");
            }
            if (!v.is_zero()) g[a] = v;
        }
    }
    if (m.q_value) {
        for (auto& [a, v] : g) v = v.subst(gen::Q, *m.q_value);
        std::erase_if(g, [](const auto& kv) { return kv.second.is_zero(); });
    }
    return g;
}

struct Specialization {
    std::optional<Rat> q;  // Q -> q
    std::optional<Rat> s;  // S -> s
};

inline SymPoly specialize(const SymPoly& p, const Specialization& sp) {
    SymPoly r = p;
    if (sp.q) r = r.subst(gen::Q, *sp.q);
    if (sp.s) r = r.subst(gen::S, *sp.s);
    return r;
}

/// Parse `airy|wp|mp:<odd p|sym>|bessel|swp|smp:<odd p|sym>|kdv:<file>|bgw:<file>`.
inline ModelSpec parse_model(const std::string& sel) {
    auto colon = sel.find(':');
    std::string head = sel.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : sel.substr(colon + 1);
    if (head == "airy") return make_model(ModelId::Airy);
    if (head == "wp") return make_model(ModelId::WP);
    if (head == "bessel") return make_model(ModelId::Bessel);
    if (head == "swp") return make_model(ModelId::SWP);
    if (head == "mp" || head == "smp") {
        bool super = head == "smp";
        if (arg.empty() || arg == "sym")
            return make_model(super ? ModelId::SMP : ModelId::MP);
        return super ? make_minimal_superstring(std::stol(arg))
                     : make_minimal_string(std::stol(arg));
    }
    if (head == "kdv" || head == "bgw") {
        ModelSpec m = make_model(head == "kdv" ? ModelId::KdV : ModelId::BGW);
        if (!arg.empty()) {
            std::ifstream in(arg);
            if (!in) throw std::invalid_argument("cannot open times file " + arg);
            nlohmann::json j;
            in >> j;
            for (const auto& item : j.at("times"))
                m.custom_times[item.at("a").get<int>()] =
                    SymPoly::from_json(item.at("coeff"));
        }
        return m;
    }
    throw std::invalid_argument("unknown model selector: " + sel);
}

}  // namespace volrec
