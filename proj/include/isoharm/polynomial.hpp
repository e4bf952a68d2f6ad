#pragma once

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isoharm/rational.hpp"

namespace isoharm {

/// Dense univariate polynomial with exact rational coefficients,
/// stored in ascending degree order and kept trimmed.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<Rat> ascending) : c_(ascending) { trim(); }
    explicit Poly(std::vector<Rat> ascending) : c_(std::move(ascending)) { trim(); }

    static Poly constant(const Rat& v) { return Poly{v}; }

    static Poly monomial(int deg, const Rat& coef) {
        if (deg < 0)
            throw std::invalid_argument("negative monomial degree");
        std::vector<Rat> c(static_cast<std::size_t>(deg) + 1, Rat(0));
        c.back() = coef;
        return Poly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    const Rat& leading() const {
        if (c_.empty())
            throw std::logic_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    Rat coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size()))
            return Rat(0);
        return c_[static_cast<std::size_t>(i)];
    }

    const std::vector<Rat>& coefficients() const { return c_; }

    Rat operator()(const Rat& x) const {
        Rat v(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            v = v * x + *it;
        return v;
    }

    double eval_double(double x) const {
        double v = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            v = v * x + to_double(*it);
        return v;
    }

    Poly derivative() const {
        if (c_.size() <= 1)
            return Poly();
        std::vector<Rat> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            d[i - 1] = c_[i] * Rat(static_cast<long>(i));
        return Poly(std::move(d));
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& v : r.c_)
            v = -v;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i)
            c[i] += b.c_[i];
        return Poly(std::move(c));
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero())
            return Poly();
        std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }

    friend Poly operator*(const Rat& s, const Poly& a) {
        if (s == 0)
            return Poly();
        Poly r(a);
        for (auto& v : r.c_)
            v *= s;
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Euclidean division: a = q*b + r with deg r < deg b.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero())
            throw std::invalid_argument("polynomial division by zero");
        Poly rem = a;
        std::vector<Rat> q(a.c_.size() > b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 1, Rat(0));
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            int k = rem.degree() - b.degree();
            Rat f = rem.leading() / b.leading();
            q[static_cast<std::size_t>(k)] += f;
            rem = rem - (f * shift(b, k));
        }
        return {Poly(std::move(q)), rem};
    }

    /// Positive scalar multiple with coprime integer coefficients.
    /// Sign of the polynomial is preserved, which matters for Sturm chains.
    Poly primitive_part() const {
        if (is_zero())
            return Poly();
        Int den_lcm = 1;
        for (const auto& v : c_)
            den_lcm = boost::multiprecision::lcm(den_lcm, boost::multiprecision::denominator(v));
        Int num_gcd = 0;
        for (const auto& v : c_) {
            Int n = boost::multiprecision::numerator(v) * (den_lcm / boost::multiprecision::denominator(v));
            num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(n));
        }
        Rat scale(den_lcm, num_gcd);
        return scale * (*this);
    }

private:
    static Poly shift(const Poly& p, int k) {
        std::vector<Rat> c(p.c_.size() + static_cast<std::size_t>(k), Rat(0));
        for (std::size_t i = 0; i < p.c_.size(); ++i)
            c[i + static_cast<std::size_t>(k)] = p.c_[i];
        return Poly(std::move(c));
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<Rat> c_;
};

/// Greatest common divisor, normalized to primitive with positive leading coefficient.
inline Poly poly_gcd(Poly a, Poly b) {
    a = a.primitive_part();
    b = b.primitive_part();
    while (!b.is_zero()) {
        Poly r = Poly::divmod(a, b).second;
        a = std::move(b);
        b = r.primitive_part();
    }
    if (a.is_zero())
        return a;
    if (a.leading() < 0)
        return Rat(-1) * a;
    return a;
}

} // namespace isoharm
