/**
 * @file rat.hpp
 * @brief Arbitrary-precision rational numbers and small number-theoretic helpers.
 *
 * Rat wraps boost::multiprecision::cpp_rational: values are always stored in
 * lowest terms with a positive denominator, and zero is 0/1. Division by zero
 * raises std::domain_error instead of the backend's overflow behaviour.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace volrec {

using BigInt = boost::multiprecision::cpp_int;

class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(const BigInt& n) : v_(n) {}
    Rat(long num, long den) { init(BigInt(num), BigInt(den)); }
    Rat(const BigInt& num, const BigInt& den) { init(num, den); }

    static Rat from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(BigInt(s));
        return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    }

    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    int sign() const { return v_.sign(); }

    Rat operator-() const { Rat r; r.v_ = -v_; return r; }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

    double to_double() const { return v_.convert_to<double>(); }

    std::string str() const {
        if (den() == 1) return num().str();
        return num().str() + "/" + den().str();
    }

private:
    boost::multiprecision::cpp_rational v_;

    void init(BigInt num, BigInt den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        v_ = boost::multiprecision::cpp_rational(num, den);
    }
};

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

// (2k-1)!! for odd arguments; (-1)!! = 1 by convention.
inline BigInt double_factorial(int n) {
    if (n <= 0) return 1;
    BigInt r = 1;
    for (int i = n; i > 1; i -= 2) r *= i;
    return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

/**
 * Bernoulli number B_m for even m (B_1 = -1/2 convention, irrelevant here).
 * Computed once by the defining recurrence sum_{j=0}^{m} C(m+1,j) B_j = 0
 * and cached.
 */
inline Rat bernoulli(unsigned m) {
    if (m % 2 != 0 && m != 1)
        throw std::invalid_argument("bernoulli: odd index " + std::to_string(m));
    static std::vector<Rat> cache{Rat(1)};  // B_0 = 1
    while (cache.size() <= m) {
        unsigned k = static_cast<unsigned>(cache.size());
        if (k == 1) {
            cache.push_back(Rat(-1, 2));
            continue;
        }
        if (k % 2 == 1) {
            cache.push_back(Rat(0));
            continue;
        }
        Rat acc(0);
        for (unsigned j = 0; j < k; ++j)
            acc += Rat(binomial(k + 1, j)) * cache[j];
        cache.push_back(-acc / Rat(BigInt(k + 1)));
    }
    return cache[m];
}

}  // namespace volrec
