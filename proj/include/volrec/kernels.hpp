/**
 * @file kernels.hpp
 * @brief Numeric evaluation of the Mirzakhani-type recursion kernels H(x,y)
 *        and quadrature validation of the integration identities that tie
 *        them to the exact inverse-y coefficients.
 *
 * Bosonic moment identity:
 *   int_0^inf x^{2k+1}/(2k+1)! H(x,t) dx = sum_{l=0}^{k+1} s_l t^{2k+2-2l}/(2k+2-2l)!
 * Super moment identity:
 *   int_0^inf x^{2k+1}/(2k+1)! H(x,t) dx = sum_{l=0}^{k} s'_l t^{2k+1-2l}/(2k+1-2l)!
 * Delta-carrying kernels (Bessel, the p=1 piece of SM(p)) contribute their
 * moments analytically and are never integrated numerically.
 */
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "models.hpp"

namespace volrec {

enum class KernelId { Airy, WP, MP, Bessel, SWP, SMP };

struct KernelSpec {
    KernelId id = KernelId::Airy;
    long p = 0;  // odd p for MP/SMP; ignored otherwise
    bool super() const {
        return id == KernelId::Bessel || id == KernelId::SWP || id == KernelId::SMP;
    }
    bool has_delta() const {
        return id == KernelId::Bessel || (id == KernelId::SMP && p == 1);
    }
};

namespace kernel_detail {

inline double theta(double t) { return t > 0.0 ? 1.0 : 0.0; }
inline double u_j(long p, long j) {
    return static_cast<double>(p) / (2.0 * M_PI) * std::sin(M_PI * static_cast<double>(j) / static_cast<double>(p));
}
inline double u_j_prime(long p, long j) {
    return static_cast<double>(p) / (2.0 * M_PI) *
           std::sin(M_PI * (static_cast<double>(j) - 0.5) / static_cast<double>(p));
}

}  // namespace kernel_detail

/// Smooth part of the kernel; evaluation on delta support raises.
inline double kernel_eval(const KernelSpec& k, double x, double y) {
    using namespace kernel_detail;
    switch (k.id) {
        case KernelId::Airy:
            return theta(y - x) + theta(-x - y);
        case KernelId::WP:
            return 1.0 / (1.0 + std::exp((x - y) / 2.0)) +
                   1.0 / (1.0 + std::exp((x + y) / 2.0));
        case KernelId::MP: {
            double acc = 0.0;
            for (long j = 1; j <= (k.p - 1) / 2; ++j) {
                double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                double c = sgn * std::cos(M_PI * static_cast<double>(j) / static_cast<double>(k.p));
                double u = u_j(k.p, j);
                acc -= c * (std::exp(-u * (x + y)) * theta(x + y) +
                            std::exp(-u * (x - y)) * theta(x - y));
                acc += c * (std::exp(u * (x + y)) * theta(-x - y) +
                            std::exp(u * (x - y)) * theta(y - x));
            }
            // j = 0 term of the second sum: e^{0} (theta(-x-y) + theta(y-x)).
            acc += theta(-x - y) + theta(y - x);
            return acc;
        }
        case KernelId::Bessel:
            if (std::abs(x - y) < 1e-12 || std::abs(x + y) < 1e-12)
                throw std::domain_error("kernel_eval: Bessel kernel on delta support");
            return 0.0;
        case KernelId::SWP:
            return (1.0 / std::cosh((x - y) / 4.0) - 1.0 / std::cosh((x + y) / 4.0)) /
                   (4.0 * M_PI);
        case KernelId::SMP: {
            if (k.p == 1) {
                if (std::abs(x - y) < 1e-12 || std::abs(x + y) < 1e-12)
                    throw std::domain_error("kernel_eval: SM(1) kernel on delta support");
                return 0.0;
            }
            double acc = 0.0;
            for (long j = 1; j <= (k.p - 1) / 2; ++j) {
                double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                double cj = std::cos(M_PI * (static_cast<double>(j) - 0.5) / static_cast<double>(k.p));
                double c = sgn * cj * cj / (2.0 * M_PI);
                double u = u_j_prime(k.p, j);
                acc += c * (std::exp(-u * (x + y)) * theta(x + y) -
                            std::exp(-u * (x - y)) * theta(x - y) +
                            std::exp(u * (x + y)) * theta(-x - y) -
                            std::exp(u * (x - y)) * theta(y - x));
            }
            return acc;
        }
    }
    return 0.0;
}

inline ModelSpec kernel_model(const KernelSpec& k) {
    switch (k.id) {
        case KernelId::Airy: return make_model(ModelId::Airy);
        case KernelId::WP: return make_model(ModelId::WP);
        case KernelId::MP: return make_minimal_string(k.p);
        case KernelId::Bessel: return make_model(ModelId::Bessel);
        case KernelId::SWP: return make_model(ModelId::SWP);
        case KernelId::SMP: return make_minimal_superstring(k.p);
    }
    return make_model(ModelId::Airy);
}

struct MomentCheck {
    int k;
    double t;
    double quadrature;
    double series;
    double rel_err;
    bool pass;
};

struct KernelReport {
    std::string name;
    std::vector<MomentCheck> checks;
    bool pass = true;
};

namespace kernel_detail {

inline double integrate_split(const std::function<double(double)>& f, double split,
                              double xmax) {
    using boost::math::quadrature::gauss_kronrod;
    double tol = 1e-12;
    double a = 0.0, total = 0.0;
    if (split > 0.0 && split < xmax) {
        total += gauss_kronrod<double, 31>::integrate(f, a, split, 12, tol);
        a = split;
    }
    total += gauss_kronrod<double, 31>::integrate(f, a, xmax, 12, tol);
    return total;
}

}  // namespace kernel_detail

/**
 * Quadrature check of the moment identity for one kernel, k <= k_max and the
 * given t samples. s_l are produced by invert_y and evaluated at P = pi^2,
 * S = 1 (Q already substituted for numeric p).
 */
inline KernelReport check_h_moments(const KernelSpec& kern, int k_max,
                                    const std::vector<double>& t_samples,
                                    double tol = 1e-8) {
    KernelReport rep;
    rep.name = "h-moments";
    ModelSpec model = kernel_model(kern);
    InvYSeries inv = invert_y(model, k_max + 3);
    std::map<unsigned, double> assign{{gen::P, M_PI * M_PI}, {gen::S, 1.0}};
    std::vector<double> s_num;
    for (const auto& sp : inv.s) s_num.push_back(sp.eval(assign));

    for (int k = 0; k <= k_max; ++k) {
        for (double t : t_samples) {
            double series = 0.0;
            if (!kern.super()) {
                for (int l = 0; l <= k + 1; ++l)
                    series += s_num[static_cast<size_t>(l)] * std::pow(t, 2 * (k + 1 - l)) /
                              factorial(static_cast<unsigned>(2 * (k + 1 - l))).convert_to<double>();
            } else {
                for (int l = 0; l <= k; ++l)
                    series += s_num[static_cast<size_t>(l)] * std::pow(t, 2 * (k - l) + 1) /
                              factorial(static_cast<unsigned>(2 * (k - l) + 1)).convert_to<double>();
            }
            double quad = 0.0;
            if (kern.has_delta()) {
                // H = delta(x-t) - delta(x+t): only the first hits x > 0.
                quad = std::pow(t, 2 * k + 1) /
                       factorial(static_cast<unsigned>(2 * k + 1)).convert_to<double>();
            } else {
                double decay = 0.4;  // slowest exponential rate in the suite
                double xmax = t + 2.0 + 45.0 / decay;
                if (kern.id == KernelId::Airy) xmax = t + 1.0;
                auto f = [&](double x) {
                    return std::pow(x, 2 * k + 1) /
                           factorial(static_cast<unsigned>(2 * k + 1)).convert_to<double>() *
                           kernel_eval(kern, x, t);
                };
                quad = kernel_detail::integrate_split(f, t, xmax);
            }
            double denom = std::max(std::abs(series), 1e-300);
            double rel = std::abs(quad - series) / denom;
            bool ok = rel < tol;
            rep.checks.push_back({k, t, quad, series, rel, ok});
            rep.pass = rep.pass && ok;
        }
    }
    return rep;
}

/// int_0^inf x^{2k+1}/(e^x - 1) dx = (2k+1)! zeta(2k+2), k <= k_max.
inline KernelReport check_twist_moment(int k_max, double tol = 1e-8) {
    using boost::math::quadrature::gauss_kronrod;
    KernelReport rep;
    rep.name = "twist-moment";
    for (int k = 0; k <= k_max; ++k) {
        auto f = [&](double x) {
            if (x < 1e-12) return 0.0;
            return std::pow(x, 2 * k + 1) / std::expm1(x);
        };
        double quad = gauss_kronrod<double, 31>::integrate(f, 0.0, 120.0, 12, 1e-12);
        double exact = factorial(static_cast<unsigned>(2 * k + 1)).convert_to<double>() *
                       zeta_even(static_cast<unsigned>(k + 1))
                           .eval({{gen::P, M_PI * M_PI}});
        double rel = std::abs(quad - exact) / std::abs(exact);
        bool ok = rel < tol;
        rep.checks.push_back({k, 0.0, quad, exact, rel, ok});
        rep.pass = rep.pass && ok;
    }
    return rep;
}

/// |H(x,-y) -+ H(x,y)| on a grid away from singular support.
inline double kernel_parity_defect(const KernelSpec& k) {
    double worst = 0.0;
    for (double x : {0.3, 0.9, 1.7, 2.6}) {
        for (double y : {0.4, 1.1, 2.2}) {
            double a = kernel_eval(k, x, y);
            double b = kernel_eval(k, x, -y);
            double d = k.super() ? std::abs(a + b) : std::abs(a - b);
            worst = std::max(worst, d);
        }
    }
    return worst;
}

}  // namespace volrec
