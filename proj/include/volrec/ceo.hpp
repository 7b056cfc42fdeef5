/**
 * @file ceo.hpp
 * @brief CEO topological recursion as formal residue extraction, untwisted
 *        and with the Masur-Veech twist, the dilaton-leaf evaluation, and the
 *        Laplace bridge between correlation and volume tables.
 *
 * Everything is truncated Laurent algebra in the local variable w at the
 * branch point: the kernel contributes w^{2a1+1}/(y(w)-y(-w)), the recursion
 * operand carries either plain principal parts 1/w^{2b+2} or, in the twisted
 * case, Hurwitz-zeta expansions 1/w^{2b+2} + sum_k C(2k+2b+1,2k) zeta(2k+2b+2)
 * w^{2k}. The coefficient of w^0 of kernel times operand is the new entry.
 * Signs are pinned by the anchor W^A_{1,1} = 1/(8 z^4).
 */
#pragma once

#include "abo.hpp"

namespace volrec {

using CorrTable = VolumeTable;  // Basis::spectral

/// Truncated Laurent series in w over SymPoly, window [lo, hi].
class WSeries {
public:
    WSeries(int lo, int hi) : lo_(lo), hi_(hi), c_(static_cast<size_t>(hi - lo + 1)) {}

    void add(int pow, const SymPoly& v) {
        if (pow < lo_ || pow > hi_ || v.is_zero()) return;
        c_[static_cast<size_t>(pow - lo_)] += v;
    }
    const SymPoly& at(int pow) const {
        static const SymPoly zero;
        if (pow < lo_ || pow > hi_) return zero;
        return c_[static_cast<size_t>(pow - lo_)];
    }
    int lo() const { return lo_; }
    int hi() const { return hi_; }

    /// Accumulate the product a*b into *this (clipped to the window).
    void add_product(const WSeries& a, const WSeries& b) {
        for (int i = a.lo_; i <= a.hi_; ++i) {
            const SymPoly& ai = a.at(i);
            if (ai.is_zero()) continue;
            int jlo = std::max(b.lo_, lo_ - i);
            int jhi = std::min(b.hi_, hi_ - i);
            for (int j = jlo; j <= jhi; ++j) {
                const SymPoly& bj = b.at(j);
                if (!bj.is_zero()) add(i + j, ai * bj);
            }
        }
    }

    bool pure_parity(int parity) const {
        for (int i = lo_; i <= hi_; ++i)
            if (!at(i).is_zero() && ((i % 2 + 2) % 2) != parity) return false;
        return true;
    }

private:
    int lo_, hi_;
    std::vector<SymPoly> c_;
};

namespace ceo_detail {

/// Basis series of an internal leg: 1/w^{2b+2}, plus the Hurwitz regular part
/// C(2k+2b+1, 2k) zeta(2k+2b+2) w^{2k} when twisted.
inline WSeries leg_basis(int b, bool twisted, int lo, int hi) {
    WSeries xi(lo, hi);
    xi.add(-2 * b - 2, SymPoly(1));
    if (twisted)
        for (int k = 0; 2 * k <= hi; ++k)
            xi.add(2 * k,
                   Rat(binomial(static_cast<unsigned>(2 * k + 2 * b + 1),
                                static_cast<unsigned>(2 * k))) *
                       zeta_even(static_cast<unsigned>(k + b + 1)));
    return xi;
}

/// W_{0,2}(w,-w): 1/(4w^2) untwisted; zeta_H(2; 2w) twisted.
inline WSeries w02_diagonal(bool twisted, int lo, int hi) {
    WSeries s(lo, hi);
    s.add(-2, SymPoly(Rat(1, 4)));
    if (twisted) {
        Rat four_k(1);
        for (int k = 0; 2 * k <= hi; ++k) {
            s.add(2 * k, Rat(2 * k + 1) * four_k * zeta_even(static_cast<unsigned>(k + 1)));
            four_k *= Rat(4);
        }
    }
    return s;
}

}  // namespace ceo_detail

/**
 * One CEO entry. The table must already hold every lower-level entry; `pos`
 * picks the distinguished slot of the sorted multi-index.
 */
inline SymPoly ceo_entry(const InvYSeries& inv, bool twisted, const CorrTable& table,
                         int g, const MultiIndex& a_sorted, size_t pos = 0) {
    int n = static_cast<int>(a_sorted.size());
    int a1 = a_sorted[pos];
    MultiIndex rest = detail::erase_at(a_sorted, pos);
    bool super = inv.super;

    // Kernel factor w^{2a1+1}/(y(w)-y(-w)) = (1/2) sum_l s_l w^{2a1+2l} (+2 super).
    // Only window powers [lo, 0] of the operand can reach [w^0].
    int l_cap = static_cast<int>(inv.order()) - 1;
    int lo = -(2 * a1 + 2 * l_cap + (super ? 2 : 0)) - 2;
    int hi = -lo;
    WSeries bracket(lo, hi);

    if (g == 0 && n == 3) {
        // omega_{0,2} cross terms only; even-even pairing survives as
        // 2 (2a2+1)(2a3+1) w^{2a2+2a3}.
        bracket.add(2 * rest[0] + 2 * rest[1],
                    SymPoly(Rat(2 * (2 * rest[0] + 1) * (2 * rest[1] + 1))));
    } else {
        // (0,2)-cross line: sum_m 2 (2 a_m + 1) w^{2 a_m} * W_{g,n-1}(w, ...).
        if (n >= 2 && is_stable(g, n - 1)) {
            int child_bound = table.hom_bound(g, n - 1);
            for (size_t m = 0; m < rest.size(); ++m) {
                MultiIndex others = detail::erase_at(rest, m);
                WSeries phi(lo, hi);
                for (int b = 0; b <= child_bound; ++b) {
                    int sum = b;
                    for (int x : others) sum += x;
                    if (sum > child_bound) continue;
                    const SymPoly& f = table.at(g, detail::with_front(b, others));
                    if (f.is_zero()) continue;
                    WSeries xi = ceo_detail::leg_basis(b, twisted, lo, hi);
                    WSeries fs(0, 0);
                    fs.add(0, f);
                    phi.add_product(xi, fs);
                }
                WSeries pre(lo, hi);
                pre.add(2 * rest[m], SymPoly(Rat(2 * (2 * rest[m] + 1))));
                bracket.add_product(pre, phi);
            }
        }
        // Q line: W_{g-1,n+1}(w,-w,...) plus ordered stable splits, every
        // internal leg carrying its basis series.
        if (g >= 1 && g - 1 == 0 && n == 1) {
            WSeries w02 = ceo_detail::w02_diagonal(twisted, lo, hi);
            for (int p = lo; p <= hi; ++p)
                if (!w02.at(p).is_zero()) bracket.add(p, w02.at(p));
        }
        int ab_bound = std::max(table.hom_bound(g - 1, n + 1), table.hom_bound(g, n));
        std::vector<WSeries> xi;
        for (int b = 0; b <= std::max(ab_bound, 0); ++b)
            xi.push_back(ceo_detail::leg_basis(b, twisted, lo, hi));
        int rest_sum = 0;
        for (int x : rest) rest_sum += x;
        if (is_stable(g - 1, n + 1)) {
            int cap = table.hom_bound(g - 1, n + 1) - rest_sum;
            for (int a = 0; a <= std::min(ab_bound, cap); ++a)
                for (int b = 0; a + b <= cap && b <= ab_bound; ++b) {
                    MultiIndex key = rest;
                    key.push_back(a);
                    key.push_back(b);
                    std::sort(key.begin(), key.end());
                    const SymPoly& f = table.at(g - 1, key);
                    if (f.is_zero()) continue;
                    WSeries fs(0, 0);
                    fs.add(0, f);
                    WSeries pair(lo, hi);
                    pair.add_product(xi[static_cast<size_t>(a)], xi[static_cast<size_t>(b)]);
                    WSeries contrib(lo, hi);
                    contrib.add_product(pair, fs);
                    for (int p = lo; p <= 0; ++p)
                        if (!contrib.at(p).is_zero()) bracket.add(p, contrib.at(p));
                }
        }
        // Ordered stable splits, factorized per sub-multiset: the pair sum
        // is (sum_a u_a xi_a)(sum_b v_b xi_b), weighted by the subset count.
        detail::for_each_submultiset(
            rest, [&](const MultiIndex& sub, const MultiIndex& comp, const BigInt& ways) {
                for (int h = 0; h <= g; ++h) {
                    int h2 = g - h;
                    int n1 = static_cast<int>(sub.size()) + 1;
                    int n2 = static_cast<int>(comp.size()) + 1;
                    if (!is_stable(h, n1) || !is_stable(h2, n2)) continue;
                    int s1 = 0, s2 = 0;
                    for (int x : sub) s1 += x;
                    for (int x : comp) s2 += x;
                    int cap1 = table.hom_bound(h, n1) - s1;
                    int cap2 = table.hom_bound(h2, n2) - s2;
                    if (cap1 < 0 || cap2 < 0) continue;
                    WSeries U(lo, hi), V(lo, hi);
                    bool any_u = false, any_v = false;
                    for (int a = 0; a <= std::min(ab_bound, cap1); ++a) {
                        const SymPoly& f = table.at(h, detail::with_front(a, sub));
                        if (f.is_zero()) continue;
                        any_u = true;
                        WSeries fs(0, 0);
                        fs.add(0, f);
                        U.add_product(xi[static_cast<size_t>(a)], fs);
                    }
                    if (!any_u) continue;
                    for (int b = 0; b <= std::min(ab_bound, cap2); ++b) {
                        const SymPoly& f = table.at(h2, detail::with_front(b, comp));
                        if (f.is_zero()) continue;
                        any_v = true;
                        WSeries fs(0, 0);
                        fs.add(0, Rat(ways) * f);
                        V.add_product(xi[static_cast<size_t>(b)], fs);
                    }
                    if (!any_v) continue;
                    WSeries contrib(lo, hi);
                    contrib.add_product(U, V);
                    for (int p = lo; p <= 0; ++p)
                        if (!contrib.at(p).is_zero()) bracket.add(p, contrib.at(p));
                }
            });
    }

    if (!bracket.pure_parity(0))
        throw std::logic_error("ceo_entry: odd-parity leakage in residue operand");

    // [w^0] of kernel * bracket.
    SymPoly out;
    for (int l = 0; l <= l_cap; ++l) {
        const SymPoly& sl = inv.at(l);
        if (sl.is_zero()) continue;
        int pw = 2 * a1 + 2 * l + (super ? 2 : 0);
        const SymPoly& bp = bracket.at(-pw);
        if (!bp.is_zero()) out += Rat(1, 2) * (sl * bp);
    }
    return out;
}

/**
 * Full CEO recursion over all stable (g,n) with 2g-2+n <= level_max. The
 * inverse-y series must be truncated at order >= 3g-2+n (bosonic) / g+1
 * (super) of the largest target.
 */
inline CorrTable ceo_recurse(const InvYSeries& inv, bool twisted, int g_max,
                             int n_max, int level_max) {
    CorrTable table;
    table.super = inv.super;
    table.basis = Basis::spectral;
    for (int level = 1; level <= level_max; ++level) {
        for (int g = 0; 2 * g - 2 <= level; ++g) {
            int n = level - 2 * g + 2;
            // Same dependency closure as the ABO driver: (g,n) pulls (g-1,n+1).
            if (n < 1 || g > g_max || n > n_max + 2 * (g_max - g) || !is_stable(g, n))
                continue;
            int bound = table.hom_bound(g, n);
            for (const auto& a : detail::sorted_indices(n, bound)) {
                SymPoly v = ceo_entry(inv, twisted, table, g, a);
                if (!v.is_zero()) table.entries[TableKey{g, a}] = std::move(v);
            }
            table.mark(g, n);
        }
    }
    prune_table(table, g_max, n_max);
    return table;
}

inline CorrTable ceo_recurse(const ModelSpec& m, int g_max, int n_max, int level_max) {
    int order = m.super ? g_max + 2 : 3 * g_max - 2 + n_max + 1;
    order = std::max(order, level_max + 2);
    return ceo_recurse(invert_y(m, order), false, g_max, n_max, level_max);
}

inline CorrTable twisted_ceo_recurse(const ModelSpec& m, int g_max, int n_max,
                                     int level_max) {
    int order = m.super ? g_max + 2 : 3 * g_max - 2 + n_max + 1;
    order = std::max(order, level_max + 2);
    return ceo_recurse(invert_y(m, order), true, g_max, n_max, level_max);
}

/**
 * Dilaton-leaf evaluation: volume coefficients of a deformed (KdV/BGW-type)
 * model from the Airy resp. Bessel base table,
 *   F^{model(g)}_a = sum_m (-1)^m / m! sum_{b_1..b_m} prod_j gamma_{b_j}
 *                    F^{base(g)}_{a, b_1..b_m},
 * with gamma the model's t-shift weights and m bounded by homogeneity.
 */
inline SymPoly dilaton_leaf_entry(const CorrTable& base, const ModelSpec& model,
                                  int g, const MultiIndex& a_sorted) {
    int n = static_cast<int>(a_sorted.size());
    int sum_a = 0;
    for (int x : a_sorted) sum_a += x;
    bool super = model.super;
    int R = super ? (g - 1 - sum_a) : (3 * g - 3 + n - sum_a);
    if (R < 0) return SymPoly();
    auto gamma = model_shift(model, R + 2);

    SymPoly acc;
    // Partition R into m parts; bosonic parts are b_j - 1 >= 1, super b_j >= 1.
    std::vector<int> parts;
    auto emit = [&](const std::vector<int>& ps) {
        SymPoly w(1);
        Rat denom(1);
        int run = 1;
        for (size_t i = 0; i < ps.size(); ++i) {
            int b = super ? ps[i] : ps[i] + 1;
            auto it = gamma.find(b);
            if (it == gamma.end()) return;  // zero weight kills the term
            w *= it->second;
            if (i + 1 < ps.size() && ps[i + 1] == ps[i]) {
                ++run;
            } else {
                denom *= Rat(factorial(static_cast<unsigned>(run)));
                run = 1;
            }
        }
        if (ps.size() % 2 == 1) w = -w;
        MultiIndex key = a_sorted;
        for (int p : ps) key.push_back(super ? p : p + 1);
        std::sort(key.begin(), key.end());
        acc += (Rat(1) / denom) * (w * base.at(g, key));
    };
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            emit(parts);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            parts.push_back(p);
            rec(remaining - p, p);
            parts.pop_back();
        }
    };
    emit({});  // m = 0 term
    if (R > 0) rec(R, R);
    return acc;
}

inline CorrTable dilaton_leaf_eval(const CorrTable& base, const ModelSpec& model,
                                   int g_max, int n_max, int level_max) {
    CorrTable out;
    out.super = model.super;
    out.basis = base.basis;
    for (int g = 0; g <= g_max; ++g)
        for (int n = 1; n <= n_max; ++n) {
            if (!is_stable(g, n) || 2 * g - 2 + n > level_max) continue;
            for (const auto& a : detail::sorted_indices(n, out.hom_bound(g, n))) {
                SymPoly v = dilaton_leaf_entry(base, model, g, a);
                if (!v.is_zero()) out.entries[TableKey{g, a}] = std::move(v);
            }
            out.mark(g, n);
        }
    return out;
}

/**
 * The Laplace transform identifies coefficient data in the two bases
 * (L^{2a}/(2a+1)! on the volume side, 1/z^{2a+2} on the spectral side);
 * the bridge is the identity on entries and flips the tag.
 */
inline VolumeTable laplace_bridge(const CorrTable& t) {
    VolumeTable r = t;
    r.basis = (t.basis == Basis::spectral) ? Basis::length : Basis::spectral;
    return r;
}

}  // namespace volrec
