#pragma once

// Small dense complex matrices (block symbols are at most 4x4): products,
// inverse, exponential, spectral norm, eigenvalues.

#include <algorithm>
#include <cmath>

#include "slowform/common.hpp"

namespace slowform {

class SmallMatrix {
  public:
    SmallMatrix() = default;
    explicit SmallMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, Complex(0.0, 0.0)) {}

    static SmallMatrix identity(int n) {
        SmallMatrix m(n);
        for (int i = 0; i < n; ++i)
            m(i, i) = Complex(1.0, 0.0);
        return m;
    }

    int dim() const { return n_; }
    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    SmallMatrix& operator+=(const SmallMatrix& o) {
        for (size_t i = 0; i < a_.size(); ++i)
            a_[i] += o.a_[i];
        return *this;
    }
    SmallMatrix& operator*=(Complex s) {
        for (auto& v : a_)
            v *= s;
        return *this;
    }
    friend SmallMatrix operator*(Complex s, SmallMatrix m) { return m *= s; }

    friend SmallMatrix operator*(const SmallMatrix& x, const SmallMatrix& y) {
        SmallMatrix r(x.n_);
        for (int i = 0; i < x.n_; ++i)
            for (int k = 0; k < x.n_; ++k) {
                const Complex v = x(i, k);
                if (v == Complex(0.0, 0.0))
                    continue;
                for (int j = 0; j < x.n_; ++j)
                    r(i, j) += v * y(k, j);
            }
        return r;
    }

    std::vector<Complex> apply(const std::vector<Complex>& v) const {
        std::vector<Complex> r(static_cast<size_t>(n_), Complex(0.0, 0.0));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                r[static_cast<size_t>(i)] += (*this)(i, j) * v[static_cast<size_t>(j)];
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_)
            m = std::max(m, std::abs(v));
        return m;
    }

    Complex det() const {
        SmallMatrix lu = *this;
        Complex d(1.0, 0.0);
        for (int c = 0; c < n_; ++c) {
            int piv = c;
            for (int r = c + 1; r < n_; ++r)
                if (std::abs(lu(r, c)) > std::abs(lu(piv, c)))
                    piv = r;
            if (std::abs(lu(piv, c)) == 0.0)
                return Complex(0.0, 0.0);
            if (piv != c) {
                for (int j = 0; j < n_; ++j)
                    std::swap(lu(piv, j), lu(c, j));
                d = -d;
            }
            d *= lu(c, c);
            for (int r = c + 1; r < n_; ++r) {
                const Complex f = lu(r, c) / lu(c, c);
                for (int j = c; j < n_; ++j)
                    lu(r, j) -= f * lu(c, j);
            }
        }
        return d;
    }

    SmallMatrix inverse() const {
        SmallMatrix a = *this;
        SmallMatrix inv = identity(n_);
        for (int c = 0; c < n_; ++c) {
            int piv = c;
            for (int r = c + 1; r < n_; ++r)
                if (std::abs(a(r, c)) > std::abs(a(piv, c)))
                    piv = r;
            require(std::abs(a(piv, c)) > 0.0, "SmallMatrix::inverse: singular matrix");
            if (piv != c)
                for (int j = 0; j < n_; ++j) {
                    std::swap(a(piv, j), a(c, j));
                    std::swap(inv(piv, j), inv(c, j));
                }
            const Complex p = a(c, c);
            for (int j = 0; j < n_; ++j) {
                a(c, j) /= p;
                inv(c, j) /= p;
            }
            for (int r = 0; r < n_; ++r) {
                if (r == c)
                    continue;
                const Complex f = a(r, c);
                if (f == Complex(0.0, 0.0))
                    continue;
                for (int j = 0; j < n_; ++j) {
                    a(r, j) -= f * a(c, j);
                    inv(r, j) -= f * inv(c, j);
                }
            }
        }
        return inv;
    }

  private:
    int n_ = 0;
    std::vector<Complex> a_;
};

/// exp(M) by scaling-and-squaring with a degree-10 Taylor core.
inline SmallMatrix expm(const SmallMatrix& m) {
    const double norm = m.max_abs() * m.dim();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    SmallMatrix x = m;
    x *= Complex(scale, 0.0);
    SmallMatrix result = SmallMatrix::identity(m.dim());
    SmallMatrix term = SmallMatrix::identity(m.dim());
    for (int k = 1; k <= 14; ++k) {
        term = term * x;
        term *= Complex(1.0 / k, 0.0);
        result += term;
    }
    for (int s = 0; s < squarings; ++s)
        result = result * result;
    return result;
}

/// Spectral norm via power iteration on M* M.
inline double two_norm(const SmallMatrix& m) {
    const int n = m.dim();
    SmallMatrix g(n); // M* M
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex s(0.0, 0.0);
            for (int k = 0; k < n; ++k)
                s += std::conj(m(k, i)) * m(k, j);
            g(i, j) = s;
        }
    std::vector<Complex> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<size_t>(i)] = Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0);
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
        auto w = g.apply(v);
        double nw = 0.0;
        for (const auto& c : w)
            nw += std::norm(c);
        nw = std::sqrt(nw);
        if (nw == 0.0)
            return 0.0;
        for (auto& c : w)
            c /= nw;
        if (std::abs(nw - lam) < 1e-14 * std::max(1.0, nw) && it > 4) {
            lam = nw;
            break;
        }
        lam = nw;
        v = std::move(w);
    }
    return std::sqrt(lam);
}

/// Eigenvalues by Durand-Kerner on the characteristic polynomial
/// (Faddeev-LeVerrier coefficients). Fine for the 2x2/3x3 symbols used here.
inline std::vector<Complex> eigenvalues(const SmallMatrix& m) {
    const int n = m.dim();
    // Faddeev-LeVerrier: M_1 = A, c_k = -tr(M_k)/k, M_{k+1} = A (M_k + c_k I).
    // char poly: lambda^n + c[1] lambda^{n-1} + ... + c[n]
    std::vector<Complex> c(static_cast<size_t>(n) + 1, Complex(0.0, 0.0));
    c[0] = Complex(1.0, 0.0);
    SmallMatrix mk = m;
    for (int k = 1; k <= n; ++k) {
        Complex tr(0.0, 0.0);
        for (int i = 0; i < n; ++i)
            tr += mk(i, i);
        c[static_cast<size_t>(k)] = -tr / static_cast<double>(k);
        if (k < n) {
            SmallMatrix shifted = mk;
            shifted += c[static_cast<size_t>(k)] * SmallMatrix::identity(n);
            mk = m * shifted;
        }
    }
    auto poly = [&](Complex z) {
        Complex p = c[0];
        for (int k = 1; k <= n; ++k)
            p = p * z + c[static_cast<size_t>(k)];
        return p;
    };
    std::vector<Complex> roots(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        roots[static_cast<size_t>(i)] = std::pow(Complex(0.4, 0.9), i);
    for (int it = 0; it < 500; ++it) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i)
                    denom *= roots[static_cast<size_t>(i)] - roots[static_cast<size_t>(j)];
            if (std::abs(denom) < 1e-30)
                denom = Complex(1e-30, 0.0);
            Complex d = poly(roots[static_cast<size_t>(i)]) / denom;
            roots[static_cast<size_t>(i)] -= d;
            shift = std::max(shift, std::abs(d));
        }
        if (shift < 1e-14)
            break;
    }
    return roots;
}

} // namespace slowform
