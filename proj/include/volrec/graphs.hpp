/**
 * @file graphs.hpp
 * @brief Stable-graph enumeration with automorphism counts, the twist
 *        graph-sum over volume polynomials, and Masur-Veech volumes plus
 *        their minimal-string generalizations.
 *
 * Legs are labeled and fixed pointwise by automorphisms; a loop contributes
 * the factor-2 end swap. The convention is pinned by |Aut| = 2 for the
 * one-loop graph of (1,1) and by the Vol Q anchors.
 */
#pragma once

#include <set>
#include <sstream>

#include "abo.hpp"

namespace volrec {

struct StableGraph {
    std::vector<int> genus;                  // per vertex
    std::vector<std::pair<int, int>> edges;  // (u, v) with u <= v; u == v is a loop
    std::vector<int> leg_at;                 // leg i (0-based) -> vertex
    BigInt aut = 1;

    int num_vertices() const { return static_cast<int>(genus.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    std::string dot() const {
        std::ostringstream os;
        os << "graph stable {\n";
        for (int v = 0; v < num_vertices(); ++v)
            os << "  v" << v << " [label=\"g=" << genus[static_cast<size_t>(v)] << "\"];\n";
        for (const auto& [u, v] : edges) os << "  v" << u << " -- v" << v << ";\n";
        for (size_t i = 0; i < leg_at.size(); ++i) {
            os << "  L" << (i + 1) << " [shape=none];\n";
            os << "  v" << leg_at[i] << " -- L" << (i + 1) << ";\n";
        }
        os << "}\n";
        return os.str();
    }
};

namespace graph_detail {

struct Skeleton {
    int n_vertices;
    std::vector<int> genus;
    std::vector<std::vector<int>> mult;  // symmetric matrix; mult[v][v] = #loops
};

inline bool connected(const Skeleton& s) {
    int n = s.n_vertices;
    std::vector<int> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n; ++u)
            if (u != v && s.mult[static_cast<size_t>(v)][static_cast<size_t>(u)] > 0 &&
                !seen[static_cast<size_t>(u)]) {
                seen[static_cast<size_t>(u)] = 1;
                stack.push_back(u);
            }
    }
    for (int v = 0; v < n; ++v)
        if (!seen[static_cast<size_t>(v)]) return false;
    return true;
}

inline std::string canonical_code(const std::vector<int>& genus,
                                  const std::vector<std::vector<int>>& mult,
                                  const std::vector<int>& leg_at) {
    int n = static_cast<int>(genus.size());
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::string best;
    do {
        std::ostringstream os;
        for (int v = 0; v < n; ++v) os << genus[static_cast<size_t>(perm[static_cast<size_t>(v)])] << ',';
        os << '|';
        for (int leg : leg_at) {
            int pos = 0;
            for (int v = 0; v < n; ++v)
                if (perm[static_cast<size_t>(v)] == leg) pos = v;
            os << pos << ',';
        }
        os << '|';
        for (int u = 0; u <= n - 1; ++u)
            for (int v = u; v < n; ++v)
                os << mult[static_cast<size_t>(perm[static_cast<size_t>(u)])]
                          [static_cast<size_t>(perm[static_cast<size_t>(v)])]
                   << ',';
        std::string code = os.str();
        if (best.empty() || code < best) best = code;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline BigInt automorphism_count(const std::vector<int>& genus,
                                 const std::vector<std::vector<int>>& mult,
                                 const std::vector<int>& leg_at) {
    int n = static_cast<int>(genus.size());
    std::vector<std::vector<int>> legs(static_cast<size_t>(n));
    for (size_t i = 0; i < leg_at.size(); ++i)
        legs[static_cast<size_t>(leg_at[i])].push_back(static_cast<int>(i));
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    BigInt vertex_autos = 0;
    do {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) {
            int w = perm[static_cast<size_t>(v)];
            if (genus[static_cast<size_t>(v)] != genus[static_cast<size_t>(w)]) ok = false;
            else if (legs[static_cast<size_t>(v)] != legs[static_cast<size_t>(w)]) ok = false;
        }
        for (int u = 0; u < n && ok; ++u)
            for (int v = u; v < n && ok; ++v) {
                int pu = perm[static_cast<size_t>(u)], pv = perm[static_cast<size_t>(v)];
                if (mult[static_cast<size_t>(u)][static_cast<size_t>(v)] !=
                    mult[static_cast<size_t>(pu)][static_cast<size_t>(pv)])
                    ok = false;
            }
        if (ok) ++vertex_autos;
    } while (std::next_permutation(perm.begin(), perm.end()));
    BigInt half_edge = 1;
    for (int u = 0; u < n; ++u) {
        int loops = mult[static_cast<size_t>(u)][static_cast<size_t>(u)];
        half_edge *= factorial(static_cast<unsigned>(loops));
        half_edge <<= loops;  // 2^loops end swaps
        for (int v = u + 1; v < n; ++v)
            half_edge *= factorial(
                static_cast<unsigned>(mult[static_cast<size_t>(u)][static_cast<size_t>(v)]));
    }
    return vertex_autos * half_edge;
}

}  // namespace graph_detail

/**
 * All isomorphism classes of stable graphs of type (g, n); legs are labeled.
 * With exclude_genus_zero only decompositions without genus-0 parts are kept
 * (the set G-bar of the super combinatorial formulas).
 */
inline std::vector<StableGraph> enumerate_stable_graphs(int g, int n,
                                                        bool exclude_genus_zero = false) {
    if (!is_stable(g, n)) throw std::invalid_argument("enumerate_stable_graphs: unstable (g,n)");
    std::vector<StableGraph> out;
    std::set<std::string> seen;
    int max_vertices = 2 * g - 2 + n;
    for (int N = 1; N <= max_vertices; ++N) {
        int min_e = N - 1;               // connectivity
        int max_e = g + N - 1;           // sum h_v = g - (E - N + 1) >= 0
        for (int E = min_e; E <= max_e; ++E) {
            int hsum = g - (E - N + 1);
            if (hsum < 0) continue;
            // Enumerate the symmetric multiplicity matrix (loops included).
            std::vector<std::pair<int, int>> slots;
            for (int u = 0; u < N; ++u)
                for (int v = u; v < N; ++v) slots.emplace_back(u, v);
            std::vector<int> counts(slots.size(), 0);
            std::function<void(size_t, int)> place = [&](size_t si, int left) {
                if (si == slots.size()) {
                    if (left != 0) return;
                    graph_detail::Skeleton sk;
                    sk.n_vertices = N;
                    sk.mult.assign(static_cast<size_t>(N), std::vector<int>(static_cast<size_t>(N), 0));
                    for (size_t i = 0; i < slots.size(); ++i) {
                        auto [u, v] = slots[i];
                        sk.mult[static_cast<size_t>(u)][static_cast<size_t>(v)] = counts[i];
                        sk.mult[static_cast<size_t>(v)][static_cast<size_t>(u)] = counts[i];
                    }
                    if (N > 1 && !graph_detail::connected(sk)) return;
                    // Genus assignments (compositions of hsum over N vertices).
                    std::vector<int> h(static_cast<size_t>(N), 0);
                    std::function<void(int, int)> genus_rec = [&](int v, int rem) {
                        if (v == N) {
                            if (rem != 0) return;
                            // Leg assignments.
                            std::vector<int> legs(static_cast<size_t>(n), 0);
                            std::function<void(int)> leg_rec = [&](int li) {
                                if (li == n) {
                                    // Stability check per vertex.
                                    for (int vv = 0; vv < N; ++vv) {
                                        int ends = 2 * sk.mult[static_cast<size_t>(vv)][static_cast<size_t>(vv)];
                                        for (int u = 0; u < N; ++u)
                                            if (u != vv) ends += sk.mult[static_cast<size_t>(vv)][static_cast<size_t>(u)];
                                        int k = ends + static_cast<int>(std::count(
                                                           legs.begin(), legs.end(), vv));
                                        if (2 * h[static_cast<size_t>(vv)] - 2 + k <= 0) return;
                                        if (exclude_genus_zero && h[static_cast<size_t>(vv)] == 0) return;
                                    }
                                    std::string code =
                                        graph_detail::canonical_code(h, sk.mult, legs);
                                    if (!seen.insert(code).second) return;
                                    StableGraph sg;
                                    sg.genus = h;
                                    for (int u = 0; u < N; ++u)
                                        for (int v2 = u; v2 < N; ++v2)
                                            for (int c = 0;
                                                 c < sk.mult[static_cast<size_t>(u)][static_cast<size_t>(v2)];
                                                 ++c)
                                                sg.edges.emplace_back(u, v2);
                                    sg.leg_at = legs;
                                    sg.aut = graph_detail::automorphism_count(h, sk.mult, legs);
                                    out.push_back(std::move(sg));
                                    return;
                                }
                                for (int v2 = 0; v2 < N; ++v2) {
                                    legs[static_cast<size_t>(li)] = v2;
                                    leg_rec(li + 1);
                                }
                            };
                            leg_rec(0);
                            return;
                        }
                        for (int hv = 0; hv <= rem; ++hv) {
                            h[static_cast<size_t>(v)] = hv;
                            genus_rec(v + 1, rem - hv);
                        }
                        h[static_cast<size_t>(v)] = 0;
                    };
                    genus_rec(0, hsum);
                    return;
                }
                for (int c = 0; c <= left; ++c) {
                    counts[si] = c;
                    place(si + 1, left - c);
                }
                counts[si] = 0;
            };
            place(0, E);
        }
    }
    return out;
}

struct GraphContribution {
    StableGraph graph;
    SymPoly value;
};

struct GraphSumReport {
    std::vector<GraphContribution> per_graph;
    SymPoly total;

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : per_graph)
            arr.push_back({{"aut", c.graph.aut.str()},
                           {"vertices", c.graph.genus},
                           {"edges", c.graph.edges},
                           {"legs", c.graph.leg_at},
                           {"value", c.value.to_json()}});
        return nlohmann::json{{"graphs", arr}, {"total", total.to_json()}};
    }
};

namespace graph_detail {

/// Vertex volume polynomial V_{h,k}(vars) with an explicit generator slot per
/// incident edge-end variable or leg.
inline SymPoly vertex_polynomial(const VolumeTable& table, int h,
                                 const std::vector<unsigned>& var_slots) {
    int k = static_cast<int>(var_slots.size());
    SymPoly out;
    for (const auto& [key, coeff] : table.entries) {
        if (key.g != h || static_cast<int>(key.a.size()) != k) continue;
        MultiIndex perm = key.a;
        do {
            Rat w(1);
            size_t width = 0;
            for (unsigned s : var_slots) width = std::max<size_t>(width, s + 1);
            ExpVec e(width, 0);
            for (int i = 0; i < k; ++i) {
                e[var_slots[static_cast<size_t>(i)]] =
                    static_cast<uint16_t>(e[var_slots[static_cast<size_t>(i)]] +
                                          perm[static_cast<size_t>(i)]);
                w /= Rat(factorial(2 * static_cast<unsigned>(perm[static_cast<size_t>(i)]) + 1));
            }
            out += coeff * SymPoly::monomial(w, e);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

/// Product of vertex polynomials of a stable graph; edge e uses slot
/// LEG0 + n + e, legs keep their own slots.
inline SymPoly graph_polynomial(const VolumeTable& table, const StableGraph& sg, int n) {
    SymPoly prod(1);
    for (int v = 0; v < sg.num_vertices(); ++v) {
        std::vector<unsigned> slots;
        for (size_t e = 0; e < sg.edges.size(); ++e) {
            if (sg.edges[e].first == v) slots.push_back(gen::LEG0 + static_cast<unsigned>(n + e));
            if (sg.edges[e].second == v) slots.push_back(gen::LEG0 + static_cast<unsigned>(n + e));
        }
        for (size_t i = 0; i < sg.leg_at.size(); ++i)
            if (sg.leg_at[i] == v) slots.push_back(gen::leg(static_cast<unsigned>(i + 1)));
        prod *= vertex_polynomial(table, sg.genus[static_cast<size_t>(v)], slots);
        if (prod.is_zero()) break;
    }
    return prod;
}

}  // namespace graph_detail

/**
 * Twisted volume polynomial via the stable-graph sum:
 *   V_{g,n}[f] = sum_Gamma 1/|Aut| prod_v V_{h(v),k(v)} with every edge
 *   variable integrated against f; a monomial l_e^d integrates to moments[d]
 *   (for the Masur-Veech twist (2d+1)! zeta(2d+2)). Legs stay as l_i.
 */
inline GraphSumReport twist_graph_sum(const VolumeTable& table, int g, int n,
                                      const std::map<int, SymPoly>& moments,
                                      bool exclude_genus_zero = false) {
    GraphSumReport rep;
    for (auto& sg : enumerate_stable_graphs(g, n, exclude_genus_zero)) {
        SymPoly p = graph_detail::graph_polynomial(table, sg, n);
        for (size_t e = 0; e < sg.edges.size() && !p.is_zero(); ++e) {
            unsigned slot = gen::LEG0 + static_cast<unsigned>(n + e);
            SymPoly integrated;
            unsigned dmax = p.degree_in(slot);
            for (unsigned d = 0; d <= dmax; ++d) {
                SymPoly c = p.coeff_of(slot, d);
                if (c.is_zero()) continue;
                auto it = moments.find(static_cast<int>(d));
                if (it == moments.end())
                    throw std::out_of_range("twist_graph_sum: missing moment for degree " +
                                            std::to_string(d));
                integrated += c * it->second;
            }
            p = integrated;
        }
        p.scale(Rat(BigInt(1), sg.aut));
        rep.total += p;
        rep.per_graph.push_back({std::move(sg), std::move(p)});
    }
    return rep;
}

/// Masur-Veech moments d -> (2d+1)! zeta(2d+2) for d <= d_max.
inline std::map<int, SymPoly> mv_moments(int d_max) {
    std::map<int, SymPoly> m;
    for (int d = 0; d <= d_max; ++d)
        m[d] = Rat(factorial(2 * static_cast<unsigned>(d) + 1)) *
               zeta_even(static_cast<unsigned>(d) + 1);
    return m;
}

inline Rat alpha_norm(int g, int n) {
    if (4 * g - 4 + n < 0) throw std::invalid_argument("alpha: 4g-4+n < 0");
    return Rat(2) * Rat(6 * g - 6 + 2 * n) * Rat(factorial(static_cast<unsigned>(4 * g - 4 + n))) *
           Rat(BigInt(1) << static_cast<unsigned>(4 * g - 3 + n));
}

inline Rat beta_norm(int g, int n) {
    if (4 * g - 4 + n < 0 || 6 * g - 7 + 2 * n < 0)
        throw std::invalid_argument("beta: out of range");
    return Rat(BigInt(1) << static_cast<unsigned>(4 * g - 2 + n)) *
           Rat(factorial(static_cast<unsigned>(4 * g - 4 + n)),
               factorial(static_cast<unsigned>(6 * g - 7 + 2 * n)));
}

/**
 * Combinatorial side of the Masur-Veech volume and its generalizations:
 * the alpha-normalized stable-graph sum over edge-degree assignments d with
 * |d| = bound (strict = true, Masur-Veech) or |d| <= bound (automatic from
 * homogeneity when strict = false), legs set to zero.
 */
inline SymPoly graph_route_volume(const VolumeTable& vertex_table, int g, int n,
                                  bool strict_top_degree, bool exclude_genus_zero,
                                  bool alpha_normalized) {
    SymPoly total;
    for (const auto& sg : enumerate_stable_graphs(g, n, exclude_genus_zero)) {
        int k = sg.num_edges();
        SymPoly p = graph_detail::graph_polynomial(vertex_table, sg, n);
        for (int i = 1; i <= n; ++i) p = p.subst(gen::leg(static_cast<unsigned>(i)), Rat(0));
        // Collect monomials in the edge slots.
        SymPoly acc;
        std::function<void(SymPoly, int, int, Rat)> walk = [&](SymPoly cur, int e, int dsum,
                                                               Rat w) {
            if (cur.is_zero()) return;
            if (e == k) {
                int target = vertex_table.super ? g - 1 - k : 3 * g - 3 + n - k;
                if (strict_top_degree && dsum != target) return;
                acc += w * cur;
                return;
            }
            unsigned slot = gen::LEG0 + static_cast<unsigned>(n + e);
            unsigned dmax = cur.degree_in(slot);
            for (unsigned d = 0; d <= dmax; ++d) {
                SymPoly c = cur.coeff_of(slot, d);
                if (c.is_zero()) continue;
                Rat zeta_w = Rat(factorial(2 * d + 1));
                walk(c * zeta_even(d + 1), e + 1, dsum + static_cast<int>(d), w * zeta_w);
            }
        };
        walk(p, 0, 0, Rat(1));
        acc.scale(Rat(BigInt(1), sg.aut));
        total += acc;
    }
    if (alpha_normalized)
        total.scale(alpha_norm(g, n) / Rat(factorial(static_cast<unsigned>(6 * g - 6 + 2 * n))));
    return total;
}

/**
 * Vol Q_{g,n} computed both ways -- beta * (constant term of the twisted
 * Kontsevich-Witten polynomial) and the alpha-normalized graph sum over
 * top-degree Weil-Petersson coefficients -- asserted equal.
 */
inline SymPoly masur_veech_volume(int g, int n) {
    int level = 2 * g - 2 + n;
    // Route (i): twisted ABO on the Airy data.
    ModelSpec airy = make_model(ModelId::Airy);
    InitialData data(invert_y(airy, level + 2), mv_twist_weights(2 * (3 * g - 3 + n) + 2));
    VolumeTable twisted = abo_recurse(data, g, level + 2, level);
    SymPoly tw_const = twisted.at(g, MultiIndex(static_cast<size_t>(n), 0));
    SymPoly route_i = beta_norm(g, n) * tw_const;
    // Route (ii): graph sum over top-degree WP coefficients (legs at zero).
    ModelSpec wp = make_model(ModelId::WP);
    VolumeTable wp_table =
        specialize(abo_recurse(initial_data_from_s(invert_y(wp, level + 2)), g,
                               level + 2, level),
                   Specialization{std::nullopt, Rat(1)});
    SymPoly route_ii = graph_route_volume(wp_table, g, n, true, false, true);
    if (route_i != route_ii)
        throw std::runtime_error("masur_veech_volume: route disagreement at (" +
                                 std::to_string(g) + "," + std::to_string(n) + ")");
    return route_i;
}

/**
 * Generalized twisted volume for the (2,p) minimal string (beta-normalized,
 * full graph set, relaxed degree bound) or the (2,2p-2) minimal superstring
 * (unnormalized constant term, graphs without genus-zero vertices). Both
 * routes are computed and must agree.
 */
inline SymPoly generalized_volume(const ModelSpec& model, int g, int n) {
    int level = 2 * g - 2 + n;
    int order = model.super ? g + 2 : 3 * g - 2 + n + 1;
    InitialData plain(invert_y(model, std::max(order, level + 2)));
    InitialData twisted =
        twist_initial_data(plain, mv_twist_weights(2 * (3 * g - 3 + n) + 2));
    VolumeTable tw_table = abo_recurse(twisted, g, level + 2, level);
    SymPoly tw_const = tw_table.at(g, MultiIndex(static_cast<size_t>(n), 0));

    VolumeTable vertex_table = abo_recurse(plain, g, level + 2, level);
    if (!model.super) {
        SymPoly route_i = beta_norm(g, n) * tw_const;
        SymPoly route_ii = graph_route_volume(vertex_table, g, n, false, false, true);
        if (route_i != route_ii)
            throw std::runtime_error("generalized_volume: route disagreement");
        return route_i;
    }
    SymPoly route_ii = graph_route_volume(vertex_table, g, n, false, true, false);
    if (tw_const != route_ii)
        throw std::runtime_error("generalized_volume: route disagreement (super)");
    return tw_const;
}

}  // namespace volrec
