#pragma once

// Truncated Taylor series (jets) of fixed runtime order. Used to obtain exact
// higher derivatives of closed-form test functions and heat-trace oracles.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace bogo {

class Jet {
public:
    Jet() = default;
    // Constant jet of the given order.
    Jet(double value, int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) { c_[0] = value; }

    static Jet variable(double x0, int order)
    {
        Jet j(x0, order);
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double value() const { return c_[0]; }
    double coeff(int k) const { return c_[k]; }
    double& coeff(int k) { return c_[k]; }
    // k-th derivative at the expansion point
    double derivative(int k) const
    {
        double f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return c_[k] * f;
    }

    Jet& operator+=(const Jet& o)
    {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator+=(double a)
    {
        c_[0] += a;
        return *this;
    }
    Jet& operator*=(double a)
    {
        for (auto& v : c_) v *= a;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator+(double b, Jet a) { return a += b; }
    friend Jet operator-(Jet a, double b) { return a += -b; }
    friend Jet operator-(double b, Jet a) { return (a *= -1.0) += b; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double b, Jet a) { return a *= b; }
    friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
    friend Jet operator-(Jet a) { return a *= -1.0; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r(0.0, a.order());
        for (int k = 0; k <= a.order(); ++k) {
            double s = 0;
            for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
            r.c_[k] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b)
    {
        Jet r(0.0, a.order());
        for (int k = 0; k <= a.order(); ++k) {
            double s = a.c_[k];
            for (int i = 1; i <= k; ++i) s -= b.c_[i] * r.c_[k - i];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }
    friend Jet operator/(double a, const Jet& b) { return Jet(a, b.order()) / b; }

    friend Jet exp(const Jet& a)
    {
        // r' = a' r
        Jet r(std::exp(a.c_[0]), a.order());
        for (int k = 1; k <= a.order(); ++k) {
            double s = 0;
            for (int i = 1; i <= k; ++i) s += i * a.c_[i] * r.c_[k - i];
            r.c_[k] = s / k;
        }
        return r;
    }

    friend Jet log(const Jet& a)
    {
        // a r' = a'
        Jet r(std::log(a.c_[0]), a.order());
        for (int k = 1; k <= a.order(); ++k) {
            double s = k * a.c_[k];
            for (int i = 1; i < k; ++i) s -= i * r.c_[i] * a.c_[k - i];
            r.c_[k] = s / (k * a.c_[0]);
        }
        return r;
    }

    friend Jet pow(const Jet& a, double p)
    {
        // a r' = p a' r
        Jet r(std::pow(a.c_[0], p), a.order());
        for (int k = 1; k <= a.order(); ++k) {
            double s = 0;
            for (int i = 1; i <= k; ++i) s += (p * i - (k - i)) * a.c_[i] * r.c_[k - i];
            r.c_[k] = s / (k * a.c_[0]);
        }
        return r;
    }

    friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

private:
    std::vector<double> c_;
};

using JetFunction = std::function<Jet(const Jet&)>;

}  // namespace bogo
