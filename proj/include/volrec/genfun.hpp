/**
 * @file genfun.hpp
 * @brief Truncated generating functions Z / log Z in the variables t_a and
 *        hbar^2, differential operators on them (Virasoro, cut-and-join,
 *        Masur-Veech group action), and the t-shift route to model tables.
 *
 * A key (e, {a_1..a_n}) stores the coefficient of hbar^{2e} t_{a_1}...t_{a_n}
 * as a monomial coefficient (no 1/n!; the table normalization
 * F^{(g)}_{a} = coeff * prod_a mult_a! is applied at the boundary). The
 * integer grading level(key) = 2e + n is the Euler weight every solver is
 * truncated by.
 */
#pragma once

#include <functional>
#include <unordered_map>

#include "abo.hpp"

namespace volrec {

struct GFKey {
    int e = 0;        // power of hbar^2
    MultiIndex a;     // sorted t-indices
    bool operator==(const GFKey& o) const { return e == o.e && a == o.a; }
};

struct GFKeyHash {
    size_t operator()(const GFKey& k) const {
        size_t h = std::hash<int>()(k.e);
        for (int x : k.a) h = h * 1000003u + static_cast<size_t>(x + 7);
        return h;
    }
};

inline int gf_level(const GFKey& k) { return 2 * k.e + static_cast<int>(k.a.size()); }

struct GenFun {
    enum class Mode { Z, logZ };
    Mode mode = Mode::Z;
    int level_max = 0;
    std::unordered_map<GFKey, SymPoly, GFKeyHash> entries;
    size_t dropped = 0;  // audit: contributions beyond level_max

    void add(GFKey key, const SymPoly& v) {
        if (v.is_zero()) return;
        if (gf_level(key) > level_max) {
            ++dropped;
            return;
        }
        auto [it, fresh] = entries.try_emplace(std::move(key), v);
        if (!fresh) {
            it->second += v;
            if (it->second.is_zero()) entries.erase(it);
        }
    }

    const SymPoly& coeff(int e, MultiIndex a) const {
        static const SymPoly zero;
        std::sort(a.begin(), a.end());
        auto it = entries.find(GFKey{e, std::move(a)});
        return it == entries.end() ? zero : it->second;
    }

    /// Table-normalized volume coefficient F^{(g)}_{a1..an} (logZ mode).
    SymPoly table_coeff(int g, MultiIndex a) const {
        if (mode != Mode::logZ)
            throw std::logic_error("table_coeff: logZ mode required");
        std::sort(a.begin(), a.end());
        SymPoly c = coeff(g - 1, a);
        Rat mult(1);
        for (size_t i = 0; i < a.size();) {
            size_t j = i;
            while (j < a.size() && a[j] == a[i]) ++j;
            mult *= Rat(factorial(static_cast<unsigned>(j - i)));
            i = j;
        }
        return mult * c;
    }
};

/// One additive term of a differential operator:
/// scalar * hbar^{2*de} * prod t_{tmul} * prod d/dt_{dmul}.
struct OpTerm {
    SymPoly scalar;
    int de = 0;
    MultiIndex tmul;
    MultiIndex dmul;
};

struct DiffOperator {
    std::vector<OpTerm> terms;
};

namespace gf_detail {

inline bool remove_one(MultiIndex& a, int v, int& mult_out) {
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it == a.end() || *it != v) return false;
    mult_out = static_cast<int>(std::count(it, a.end(), v));
    a.erase(it);
    return true;
}

inline void insert_sorted(MultiIndex& a, int v) {
    a.insert(std::upper_bound(a.begin(), a.end(), v), v);
}

}  // namespace gf_detail

/// Apply op to f exactly, truncating outputs beyond f.level_max (audited).
inline GenFun apply_operator(const DiffOperator& op, const GenFun& f) {
    GenFun out;
    out.mode = f.mode;
    out.level_max = f.level_max;
    for (const auto& [key, coeff] : f.entries) {
        for (const auto& term : op.terms) {
            Rat factor(1);
            MultiIndex a = key.a;
            bool dead = false;
            for (int d : term.dmul) {
                int mult = 0;
                if (!gf_detail::remove_one(a, d, mult)) {
                    dead = true;
                    break;
                }
                factor *= Rat(mult);
            }
            if (dead) continue;
            for (int t : term.tmul) gf_detail::insert_sorted(a, t);
            SymPoly v = (factor * term.scalar) * coeff;
            out.add(GFKey{key.e + term.de, std::move(a)}, v);
        }
    }
    return out;
}

/**
 * Cut-and-join operator, materialized with t- and derivative indices capped
 * at idx_max:
 *   Airy:   (1/3)(2a+1)(2b+1) t_a t_b d_{a+b-1} + (h^2/6)(2a+2b+5) t_{a+b+2}
 *           d_a d_b + t_0^3/(6 h^2) + t_1/8,
 *   Bessel: (2a+1)(2b+1) t_a t_b d_{a+b} + (h^2/2)(2a+2b+3) t_{a+b+1} d_a d_b
 *           + t_0/8.
 */
inline DiffOperator cut_and_join_build(bool bessel, int idx_max) {
    DiffOperator op;
    for (int a = 0; a <= idx_max; ++a)
        for (int b = 0; b <= idx_max; ++b) {
            int d = bessel ? a + b : a + b - 1;
            if (d >= 0 && d <= idx_max) {
                Rat c = bessel ? Rat((2 * a + 1) * (2 * b + 1))
                               : Rat((2 * a + 1) * (2 * b + 1), 3);
                op.terms.push_back({SymPoly(c), 0, {std::min(a, b), std::max(a, b)}, {d}});
            }
            int t = bessel ? a + b + 1 : a + b + 2;
            if (t <= idx_max) {
                Rat c = bessel ? Rat(2 * a + 2 * b + 3, 2) : Rat(2 * a + 2 * b + 5, 6);
                if (a <= b)  // one term per unordered derivative pair
                    op.terms.push_back({SymPoly(a == b ? c : Rat(2) * c), 1, {t}, {a, b}});
            }
        }
    if (bessel) {
        op.terms.push_back({SymPoly(Rat(1, 8)), 0, {0}, {}});
    } else {
        op.terms.push_back({SymPoly(Rat(1, 6)), -1, {0, 0, 0}, {}});
        op.terms.push_back({SymPoly(Rat(1, 8)), 0, {1}, {}});
    }
    return op;
}

namespace gf_detail {

/// Fast in-place cut-and-join application (same action as the materialized
/// operator, iterating only the indices present in each monomial).
inline GenFun cj_apply(bool bessel, const GenFun& f) {
    GenFun out;
    out.mode = f.mode;
    out.level_max = f.level_max;
    for (const auto& [key, coeff] : f.entries) {
        // t_a t_b d_c family.
        for (size_t i = 0; i < key.a.size(); ++i) {
            if (i > 0 && key.a[i] == key.a[i - 1]) continue;
            int c = key.a[i];
            int mult = static_cast<int>(std::count(key.a.begin() + static_cast<long>(i),
                                                   key.a.end(), c));
            int ab_sum = bessel ? c : c + 1;
            for (int a = 0; a <= ab_sum; ++a) {
                int b = ab_sum - a;
                Rat w = Rat((2 * a + 1) * (2 * b + 1) * mult);
                if (!bessel) w /= Rat(3);
                MultiIndex na = key.a;
                int m_unused = 0;
                remove_one(na, c, m_unused);
                insert_sorted(na, a);
                insert_sorted(na, b);
                out.add(GFKey{key.e, std::move(na)}, w * coeff);
            }
        }
        // hbar^2 t d d family: ordered derivative pairs (a, b).
        for (size_t i = 0; i < key.a.size(); ++i) {
            if (i > 0 && key.a[i] == key.a[i - 1]) continue;
            int a = key.a[i];
            int ma = static_cast<int>(std::count(key.a.begin() + static_cast<long>(i),
                                                 key.a.end(), a));
            for (size_t j = 0; j < key.a.size(); ++j) {
                if (j > 0 && key.a[j] == key.a[j - 1]) continue;
                int b = key.a[j];
                int mb = static_cast<int>(std::count(key.a.begin() + static_cast<long>(j),
                                                     key.a.end(), b));
                int pairs = (a == b) ? ma * (ma - 1) : ma * mb;
                if (pairs == 0) continue;
                Rat w = bessel ? Rat(2 * a + 2 * b + 3, 2) : Rat(2 * a + 2 * b + 5, 6);
                w *= Rat(pairs);
                MultiIndex na = key.a;
                int m_unused = 0;
                remove_one(na, a, m_unused);
                remove_one(na, b, m_unused);
                insert_sorted(na, bessel ? a + b + 1 : a + b + 2);
                out.add(GFKey{key.e + 1, std::move(na)}, w * coeff);
            }
        }
        // Constant terms.
        if (bessel) {
            MultiIndex na = key.a;
            insert_sorted(na, 0);
            out.add(GFKey{key.e, std::move(na)}, Rat(1, 8) * coeff);
        } else {
            MultiIndex na = key.a;
            insert_sorted(na, 0);
            insert_sorted(na, 0);
            insert_sorted(na, 0);
            out.add(GFKey{key.e - 1, std::move(na)}, Rat(1, 6) * coeff);
            MultiIndex nb = key.a;
            insert_sorted(nb, 1);
            out.add(GFKey{key.e, std::move(nb)}, Rat(1, 8) * coeff);
        }
    }
    return out;
}

}  // namespace gf_detail

/// Z = sum_k Z_k with Z_k = W Z_{k-1} / k, truncated at grading k_max.
inline GenFun cj_iterate_Z(bool bessel, int k_max) {
    GenFun z;
    z.mode = GenFun::Mode::Z;
    z.level_max = k_max;
    GenFun layer = z;
    layer.add(GFKey{0, {}}, SymPoly(1));
    z.add(GFKey{0, {}}, SymPoly(1));
    for (int k = 1; k <= k_max; ++k) {
        GenFun next = gf_detail::cj_apply(bessel, layer);
        layer = GenFun{};
        layer.mode = GenFun::Mode::Z;
        layer.level_max = k_max;
        for (auto& [key, v] : next.entries) {
            SymPoly scaled = Rat(1, k) * v;
            layer.add(key, scaled);
            z.add(key, scaled);
        }
    }
    return z;
}

/// Graded product clipped at level_max.
inline GenFun gf_product(const GenFun& x, const GenFun& y) {
    GenFun out;
    out.mode = x.mode;
    out.level_max = std::min(x.level_max, y.level_max);
    for (const auto& [ka, va] : x.entries) {
        int la = gf_level(ka);
        for (const auto& [kb, vb] : y.entries) {
            if (la + gf_level(kb) > out.level_max) continue;
            MultiIndex a = ka.a;
            for (int v : kb.a) gf_detail::insert_sorted(a, v);
            out.add(GFKey{ka.e + kb.e, std::move(a)}, va * vb);
        }
    }
    return out;
}

/// log Z for Z = 1 + (positive-level part).
inline GenFun gf_log(const GenFun& z) {
    if (z.mode != GenFun::Mode::Z) throw std::logic_error("gf_log: Z mode required");
    GenFun u = z;  // u = Z - 1
    u.entries.erase(GFKey{0, {}});
    GenFun out;
    out.mode = GenFun::Mode::logZ;
    out.level_max = z.level_max;
    GenFun pw = u;
    for (int j = 1; j <= z.level_max && !pw.entries.empty(); ++j) {
        Rat c = (j % 2 == 1) ? Rat(1, j) : Rat(-1, j);
        for (const auto& [k, v] : pw.entries) out.add(k, c * v);
        if (j < z.level_max) pw = gf_product(pw, u);
    }
    return out;
}

/// exp F for F with entries of level >= 1.
inline GenFun gf_exp(const GenFun& f) {
    if (f.mode != GenFun::Mode::logZ) throw std::logic_error("gf_exp: logZ mode required");
    GenFun out;
    out.mode = GenFun::Mode::Z;
    out.level_max = f.level_max;
    out.add(GFKey{0, {}}, SymPoly(1));
    GenFun base = f;
    base.mode = GenFun::Mode::Z;
    GenFun pw = base;
    Rat fact(1);
    for (int j = 1; j <= f.level_max && !pw.entries.empty(); ++j) {
        fact *= Rat(j);
        for (const auto& [k, v] : pw.entries) out.add(k, (Rat(1) / fact) * v);
        if (j < f.level_max) pw = gf_product(pw, base);
    }
    return out;
}

/// Z-mode generating function of a registry kind via cut-and-join, and its log.
inline GenFun cj_iterate(bool bessel, int k_max) { return gf_log(cj_iterate_Z(bessel, k_max)); }

/**
 * t_a -> t_a - gamma_a on a logZ-mode generating function. Complete output
 * levels shrink: an output entry at level L receives contributions from
 * sources at levels L + m, so callers must truncate accordingly.
 */
inline GenFun shift_genfun(const GenFun& f, const std::map<int, SymPoly>& gamma) {
    if (f.mode != GenFun::Mode::logZ)
        throw std::logic_error("shift_genfun: logZ mode required");
    GenFun out;
    out.mode = GenFun::Mode::logZ;
    out.level_max = f.level_max;
    for (const auto& [key, coeff] : f.entries) {
        // For each distinct index with a shift, choose how many copies turn
        // into a factor -gamma.
        std::vector<std::tuple<int, int, const SymPoly*>> shiftable;  // (idx, mult, gamma)
        for (size_t i = 0; i < key.a.size();) {
            size_t j = i;
            while (j < key.a.size() && key.a[j] == key.a[i]) ++j;
            auto it = gamma.find(key.a[i]);
            if (it != gamma.end())
                shiftable.emplace_back(key.a[i], static_cast<int>(j - i), &it->second);
            i = j;
        }
        std::function<void(size_t, MultiIndex, SymPoly)> rec = [&](size_t pos,
                                                                   MultiIndex removedfrom,
                                                                   SymPoly w) {
            if (pos == shiftable.size()) {
                out.add(GFKey{key.e, std::move(removedfrom)}, w);
                return;
            }
            auto [idx, mult, gp] = shiftable[pos];
            SymPoly gpow(1);
            for (int j = 0; j <= mult; ++j) {
                if (j > 0) gpow *= -(*gp);
                MultiIndex next = removedfrom;
                for (int r = 0; r < j; ++r) {
                    int m_unused = 0;
                    gf_detail::remove_one(next, idx, m_unused);
                }
                rec(pos + 1, std::move(next),
                    Rat(binomial(static_cast<unsigned>(mult), static_cast<unsigned>(j))) *
                        (j > 0 ? w * gpow : w));
            }
        };
        rec(0, key.a, coeff);
    }
    return out;
}

/**
 * Generic quantum-Airy operator from initial data (twist included when the
 * data carries one):
 *   L_k = -1/2 d_{k+1} + 1/(4 h^2) sum A^{k+1}_{ab} t_a t_b
 *         + 1/2 sum B^{k+1}_{ab} t_a d_b + h^2/4 sum C^{k+1}_{ab} d_a d_b
 *         + 1/2 D^{k+1}.
 * For super (Bessel-type) data the paper's family is L^B_k = generic(k-1).
 */
inline DiffOperator virasoro_build(const InitialData& data, int k, int idx_max) {
    DiffOperator op;
    int kk = data.super() ? k - 1 : k;
    if ((data.super() && k < 0) || (!data.super() && k < -1))
        throw std::invalid_argument("virasoro_build: k out of range");
    if (kk + 1 >= 0)
        op.terms.push_back({SymPoly(Rat(-1, 2)), 0, {}, {kk + 1}});
    for (int a = 0; a <= idx_max; ++a)
        for (int b = a; b <= idx_max; ++b) {
            SymPoly Av = data.A(kk + 1, a, b);
            if (!Av.is_zero())
                op.terms.push_back({(a == b ? Rat(1, 4) : Rat(1, 2)) * Av, -1, {a, b}, {}});
        }
    for (int a = 0; a <= idx_max; ++a)
        for (int b = 0; b <= idx_max; ++b) {
            SymPoly Bv = data.B(kk + 1, a, b);
            if (!Bv.is_zero()) op.terms.push_back({Rat(1, 2) * Bv, 0, {a}, {b}});
        }
    for (int a = 0; a <= idx_max; ++a)
        for (int b = a; b <= idx_max; ++b) {
            SymPoly Cv = data.C(kk + 1, a, b);
            if (!Cv.is_zero())
                op.terms.push_back({(a == b ? Rat(1, 4) : Rat(1, 2)) * Cv, 1, {}, {a, b}});
        }
    SymPoly Dv = data.D(kk + 1);
    if (!Dv.is_zero()) op.terms.push_back({Rat(1, 2) * Dv, 0, {}, {}});
    return op;
}

struct VirasoroResidual {
    int k;
    GFKey key;
    SymPoly value;
};

/**
 * Check L_k Z = 0 for each operator, on all output monomials whose sources
 * lie inside the truncation (levels <= Z.level_max - 1).
 */
inline std::vector<VirasoroResidual> virasoro_check(
    const GenFun& z, const std::vector<std::pair<int, DiffOperator>>& ops,
    int level_max) {
    if (z.mode != GenFun::Mode::Z) throw std::logic_error("virasoro_check: Z mode required");
    std::vector<VirasoroResidual> bad;
    int complete = std::min(level_max, z.level_max - 1);
    for (const auto& [k, op] : ops) {
        GenFun r = apply_operator(op, z);
        for (const auto& [key, v] : r.entries)
            if (gf_level(key) <= complete && !v.is_zero())
                bad.push_back({k, key, v});
    }
    return bad;
}

/// Z[f] = exp( (h^2/2) sum u_{ab} d_a d_b ) Z, exact per monomial.
inline GenFun group_action_twist(const GenFun& z, const TwistWeights& u) {
    if (z.mode != GenFun::Mode::Z)
        throw std::logic_error("group_action_twist: Z mode required");
    GenFun out = z;
    GenFun layer = z;
    for (int j = 1; !layer.entries.empty(); ++j) {
        GenFun next;
        next.mode = GenFun::Mode::Z;
        next.level_max = z.level_max;
        for (const auto& [key, coeff] : layer.entries) {
            for (size_t i = 0; i < key.a.size(); ++i) {
                if (i > 0 && key.a[i] == key.a[i - 1]) continue;
                int a = key.a[i];
                int ma = static_cast<int>(std::count(key.a.begin() + static_cast<long>(i),
                                                     key.a.end(), a));
                for (size_t jj = 0; jj < key.a.size(); ++jj) {
                    if (jj > 0 && key.a[jj] == key.a[jj - 1]) continue;
                    int b = key.a[jj];
                    int mb = static_cast<int>(std::count(
                        key.a.begin() + static_cast<long>(jj), key.a.end(), b));
                    int pairs = (a == b) ? ma * (ma - 1) : ma * mb;
                    if (pairs == 0) continue;
                    const SymPoly& w = u.at(a, b);
                    if (w.is_zero()) continue;
                    MultiIndex na = key.a;
                    int m_unused = 0;
                    gf_detail::remove_one(na, a, m_unused);
                    gf_detail::remove_one(na, b, m_unused);
                    next.add(GFKey{key.e + 1, std::move(na)},
                             Rat(pairs, 2) * (w * coeff));
                }
            }
        }
        layer = GenFun{};
        layer.mode = GenFun::Mode::Z;
        layer.level_max = z.level_max;
        for (auto& [key, v] : next.entries) {
            SymPoly scaled = Rat(1, j) * v;
            layer.add(key, scaled);
            out.add(key, scaled);
        }
    }
    return out;
}

/// Extract a VolumeTable from a logZ-mode generating function.
inline VolumeTable genfun_to_table(const GenFun& f, bool super, int g_max, int n_max,
                                   int level_max) {
    VolumeTable t;
    t.super = super;
    for (int g = 0; g <= g_max; ++g)
        for (int n = 1; n <= n_max; ++n) {
            if (!is_stable(g, n) || 2 * g - 2 + n > level_max) continue;
            for (const auto& a : detail::sorted_indices(n, t.hom_bound(g, n))) {
                SymPoly v = f.table_coeff(g, a);
                if (!v.is_zero()) t.entries[TableKey{g, a}] = std::move(v);
            }
            t.mark(g, n);
        }
    return t;
}

}  // namespace volrec
