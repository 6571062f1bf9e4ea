#pragma once

// Fourier representation of multi-component fields on the 1-D torus:
// coefficient storage, Sobolev/C1 norms, mode projections and exactly
// dealiased evaluation of polynomial nonlinearities.

#include <algorithm>
#include <cassert>
#include <cmath>

#include "slowform/common.hpp"

namespace slowform {

// ---------------------------------------------------------------------------
// SpectralField

/// Multi-component complex Fourier coefficient vector, modes k in [-K, K].
/// Components flagged real satisfy coeff(-k) = conj(coeff(k)).
class SpectralField {
  public:
    SpectralField() = default;

    SpectralField(int max_mode, int num_components, std::vector<bool> real_flags)
        : K_(max_mode), ncomp_(num_components), real_(std::move(real_flags)),
          coef_(static_cast<size_t>(num_components) * (2 * max_mode + 1), Complex(0.0, 0.0)) {
        require(max_mode >= 0, "SpectralField: max mode must be >= 0");
        require(static_cast<int>(real_.size()) == ncomp_, "SpectralField: one reality flag per component");
    }

    static SpectralField zeros_like(const SpectralField& f) {
        return SpectralField(f.K_, f.ncomp_, f.real_);
    }

    int max_mode() const { return K_; }
    int num_components() const { return ncomp_; }
    int num_modes() const { return 2 * K_ + 1; }
    bool component_real(int c) const { return real_[static_cast<size_t>(c)]; }
    const std::vector<bool>& real_flags() const { return real_; }

    Complex& at(int comp, int k) { return coef_[index(comp, k)]; }
    const Complex& at(int comp, int k) const { return coef_[index(comp, k)]; }

    bool same_shape(const SpectralField& o) const {
        return K_ == o.K_ && ncomp_ == o.ncomp_ && real_ == o.real_;
    }

    SpectralField& operator+=(const SpectralField& o) {
        require(same_shape(o), "field shape mismatch in +=");
        for (size_t i = 0; i < coef_.size(); ++i)
            coef_[i] += o.coef_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require(same_shape(o), "field shape mismatch in -=");
        for (size_t i = 0; i < coef_.size(); ++i)
            coef_[i] -= o.coef_[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& c : coef_)
            c *= a;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

    /// this += a * other
    void axpy(double a, const SpectralField& o) {
        require(same_shape(o), "field shape mismatch in axpy");
        for (size_t i = 0; i < coef_.size(); ++i)
            coef_[i] += a * o.coef_[i];
    }

    bool all_finite() const {
        for (const auto& c : coef_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                return false;
        return true;
    }

    /// Restore coeff(-k) = conj(coeff(k)) on real components by averaging.
    void enforce_reality() {
        for (int c = 0; c < ncomp_; ++c) {
            if (!real_[static_cast<size_t>(c)])
                continue;
            at(c, 0) = Complex(at(c, 0).real(), 0.0);
            for (int k = 1; k <= K_; ++k) {
                Complex avg = 0.5 * (at(c, k) + std::conj(at(c, -k)));
                at(c, k) = avg;
                at(c, -k) = std::conj(avg);
            }
        }
    }

    /// Max deviation from Hermitian symmetry over real components.
    double reality_defect() const {
        double worst = 0.0;
        for (int c = 0; c < ncomp_; ++c) {
            if (!real_[static_cast<size_t>(c)])
                continue;
            worst = std::max(worst, std::abs(at(c, 0).imag()));
            for (int k = 1; k <= K_; ++k)
                worst = std::max(worst, std::abs(at(c, k) - std::conj(at(c, -k))));
        }
        return worst;
    }

  private:
    size_t index(int comp, int k) const {
        assert(comp >= 0 && comp < ncomp_ && k >= -K_ && k <= K_);
        return static_cast<size_t>(comp) * (2 * K_ + 1) + static_cast<size_t>(k + K_);
    }

    int K_ = 0;
    int ncomp_ = 0;
    std::vector<bool> real_;
    std::vector<Complex> coef_;
};

// ---------------------------------------------------------------------------
// FFT (iterative radix-2, power-of-two sizes)

namespace fft {

inline int next_pow2(int n) {
    int p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

/// In-place forward DFT: X[j] = sum_n x[n] e^{-2pi i jn/N}. inverse=true applies
/// the conjugate transform and the 1/N factor.
inline void transform(std::vector<Complex>& x, bool inverse) {
    const size_t n = x.size();
    assert((n & (n - 1)) == 0 && n > 0);
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                Complex u = x[i + j];
                Complex v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (auto& c : x)
            c *= s;
    }
}

} // namespace fft

/// Physical grid size with exact dealiasing for degree-d polynomials,
/// rounded up to a radix-2 length.
inline int dealias_grid_size(int max_mode, int degree) {
    int need = std::max((degree + 1) * max_mode + 2, 2 * max_mode + 1);
    return fft::next_pow2(need);
}

/// Synthesize one component on an N-point uniform grid (N >= 2K+1).
inline std::vector<Complex> component_to_grid(const SpectralField& f, int comp, int N) {
    require(N >= f.num_modes(), "grid too small to hold all modes");
    std::vector<Complex> hat(static_cast<size_t>(N), Complex(0.0, 0.0));
    const int K = f.max_mode();
    for (int k = 0; k <= K; ++k)
        hat[static_cast<size_t>(k)] = f.at(comp, k);
    for (int k = 1; k <= K; ++k)
        hat[static_cast<size_t>(N - k)] = f.at(comp, -k);
    fft::transform(hat, true);
    for (auto& c : hat)
        c *= static_cast<double>(N); // coefficients are e^{ikx} amplitudes, not DFT bins
    return hat;
}

/// Analyze grid values back to modes |k| <= K of the target component.
inline void component_from_grid(SpectralField& f, int comp, std::vector<Complex> grid) {
    const int N = static_cast<int>(grid.size());
    require(N >= f.num_modes(), "grid too small to recover all modes");
    fft::transform(grid, false);
    const double s = 1.0 / static_cast<double>(N);
    const int K = f.max_mode();
    for (int k = 0; k <= K; ++k)
        f.at(comp, k) = grid[static_cast<size_t>(k)] * s;
    for (int k = 1; k <= K; ++k)
        f.at(comp, -k) = grid[static_cast<size_t>(N - k)] * s;
}

// ---------------------------------------------------------------------------
// Norms

/// Toroidal Bessel potential norm (sum over components):
/// ( sum_k (1+k^2)^order |coeff(k)|^2 )^{1/2}. Negative orders allowed.
inline double hs_norm(const SpectralField& f, double order) {
    require(std::isfinite(order), "hs_norm: order must be finite");
    require(f.all_finite(), "hs_norm: field has non-finite coefficients");
    double sum = 0.0;
    for (int c = 0; c < f.num_components(); ++c) {
        for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
            const double w = std::pow(1.0 + static_cast<double>(k) * k, order);
            sum += w * std::norm(f.at(c, k));
        }
    }
    return std::sqrt(sum);
}

/// Pair components into complex groups for sup-norm purposes. Each entry is
/// either {c} (scalar component) or {re, im} (complex pair).
using ComponentGroups = std::vector<std::vector<int>>;

inline ComponentGroups singleton_groups(int ncomp) {
    ComponentGroups g;
    for (int c = 0; c < ncomp; ++c)
        g.push_back({c});
    return g;
}

/// sup |f| + sup |f'| per group, summed over groups, evaluated on a
/// 4x-oversampled collocation grid (documented approximation of the sup).
inline double c1_norm_grouped(const SpectralField& f, const ComponentGroups& groups) {
    require(f.all_finite(), "c1_norm: field has non-finite coefficients");
    const int N = fft::next_pow2(4 * f.num_modes());
    double total = 0.0;
    for (const auto& g : groups) {
        require(g.size() == 1 || g.size() == 2, "c1_norm: groups are scalars or (re,im) pairs");
        std::vector<std::vector<Complex>> vals, dvals;
        for (int c : g) {
            SpectralField d = SpectralField::zeros_like(f);
            for (int k = -f.max_mode(); k <= f.max_mode(); ++k)
                d.at(c, k) = Complex(0.0, static_cast<double>(k)) * f.at(c, k);
            vals.push_back(component_to_grid(f, c, N));
            dvals.push_back(component_to_grid(d, c, N));
        }
        double sup = 0.0, dsup = 0.0;
        for (int i = 0; i < N; ++i) {
            double v2 = 0.0, d2 = 0.0;
            for (size_t j = 0; j < g.size(); ++j) {
                v2 += std::norm(vals[j][static_cast<size_t>(i)]);
                d2 += std::norm(dvals[j][static_cast<size_t>(i)]);
            }
            sup = std::max(sup, v2);
            dsup = std::max(dsup, d2);
        }
        total += std::sqrt(sup) + std::sqrt(dsup);
    }
    return total;
}

inline double c1_norm(const SpectralField& f) {
    return c1_norm_grouped(f, singleton_groups(f.num_components()));
}

// ---------------------------------------------------------------------------
// Mode projections

enum class KeepModes { Low, High };

/// keep=Low zeroes all |k| >= k_threshold (pr onto the slow block);
/// keep=High zeroes all |k| <= k_threshold-1. The two outputs sum to the input.
inline SpectralField project_modes(const SpectralField& f, int k_threshold, KeepModes keep) {
    require(k_threshold >= 0 && k_threshold <= f.max_mode(), "project_modes: threshold out of range");
    SpectralField out = f;
    for (int c = 0; c < f.num_components(); ++c) {
        for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
            const bool low = std::abs(k) <= k_threshold - 1;
            if ((keep == KeepModes::Low && !low) || (keep == KeepModes::High && low))
                out.at(c, k) = Complex(0.0, 0.0);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial nonlinearity description (generic path; models build richer
// functors on top of the same grid machinery)

/// coeff * prod_i component_i ^ power_i, evaluated pointwise in physical space.
struct PolyTerm {
    double coeff = 1.0;
    std::vector<int> powers; // one entry per input component (across all input fields)
};

struct NonlinearitySpec {
    std::vector<PolyTerm> terms;
    int degree = 1;       // max total power over non-constant components
    int out_component = 0;
};

/// Pointwise evaluation on a grid of size >= (degree+1)*K+2, transform back,
/// truncate to |k| <= K. Fields are concatenated component-wise in order.
inline SpectralField evaluate_nonlinearity(const NonlinearitySpec& spec,
                                           const std::vector<const SpectralField*>& fields,
                                           const std::vector<double>& params = {}) {
    (void)params;
    require(!fields.empty(), "evaluate_nonlinearity: no input fields");
    const int K = fields[0]->max_mode();
    for (const auto* f : fields)
        require(f->max_mode() == K, "evaluate_nonlinearity: all fields must share K");
    const int N = dealias_grid_size(K, spec.degree);
    require(N >= (spec.degree + 1) * K + 2, "evaluate_nonlinearity: grid too small for declared degree");

    std::vector<std::vector<Complex>> grids;
    for (const auto* f : fields)
        for (int c = 0; c < f->num_components(); ++c)
            grids.push_back(component_to_grid(*f, c, N));

    std::vector<Complex> acc(static_cast<size_t>(N), Complex(0.0, 0.0));
    for (const auto& term : spec.terms) {
        require(term.powers.size() == grids.size(), "evaluate_nonlinearity: term arity mismatch");
        for (int i = 0; i < N; ++i) {
            Complex p(term.coeff, 0.0);
            for (size_t c = 0; c < grids.size(); ++c)
                for (int e = 0; e < term.powers[c]; ++e)
                    p *= grids[c][static_cast<size_t>(i)];
            acc[static_cast<size_t>(i)] += p;
        }
    }

    SpectralField out(K, 1, {fields[0]->component_real(0)});
    component_from_grid(out, 0, std::move(acc));
    out.enforce_reality();
    return out;
}

// ---------------------------------------------------------------------------
// Seeded smooth random fields (test data and experiment presets)

/// Random smooth field: |coeff(k)| ~ e^{-decay |k|}, random phases, Hermitian
/// on real components, then scaled so hs_norm(field, norm_order) = target.
inline SpectralField random_smooth_field(int K, int ncomp, const std::vector<bool>& real_flags,
                                         Rng& rng, double target_norm, double norm_order,
                                         double decay = 0.7, int max_excited = -1) {
    SpectralField f(K, ncomp, real_flags);
    const int kmax = max_excited < 0 ? K : std::min(K, max_excited);
    for (int c = 0; c < ncomp; ++c) {
        for (int k = 0; k <= kmax; ++k) {
            const double amp = std::exp(-decay * k);
            Complex z(amp * rng.normal(), amp * rng.normal());
            if (k == 0 && f.component_real(c))
                z = Complex(z.real(), 0.0);
            f.at(c, k) = z;
            if (k > 0)
                f.at(c, -k) = f.component_real(c) ? std::conj(z)
                                                  : Complex(amp * rng.normal(), amp * rng.normal());
        }
    }
    const double n = hs_norm(f, norm_order);
    if (n > 0.0)
        f *= target_norm / n;
    return f;
}

} // namespace slowform
