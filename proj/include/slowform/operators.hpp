#pragma once

// Per-mode block-multiplier realization of the linear operators A and B:
// semigroups e^{tA} (exact per mode), inverses, phi functions for exponential
// integrators, and numeric Banach-scale semigroup constants.

#include <functional>
#include <optional>
#include <sstream>

#include "slowform/matrix.hpp"
#include "slowform/spectral.hpp"

namespace slowform {

// ---------------------------------------------------------------------------
// phi functions

namespace detail {

inline Complex phi_series(int n, Complex z) {
    // phi_n(z) = sum_{j>=0} z^j / (j+n)!
    Complex term(1.0, 0.0);
    for (int j = 1; j <= n; ++j)
        term /= static_cast<double>(j);
    Complex sum = term; // j = 0 term: 1/n!
    for (int j = 1; j <= 18; ++j) {
        term *= z / static_cast<double>(j + n);
        sum += term;
    }
    return sum;
}

} // namespace detail

/// phi_0 = e^z, phi_1 = (e^z-1)/z, phi_2 = (e^z-1-z)/z^2, with a Taylor
/// branch for |z| < 0.1 to avoid cancellation.
inline Complex phi_function(int n, Complex z) {
    require(n >= 0 && n <= 2, "phi_function: n in {0,1,2}");
    if (n == 0)
        return std::exp(z);
    if (std::abs(z) < 0.1)
        return detail::phi_series(n, z);
    if (n == 1)
        return (std::exp(z) - 1.0) / z;
    return (std::exp(z) - 1.0 - z) / (z * z);
}

/// Matrix phi functions for the constant block symbols (Z must be invertible
/// on the direct branch; small-norm inputs use the series).
inline SmallMatrix phi_matrix(int n, const SmallMatrix& z) {
    require(n >= 0 && n <= 2, "phi_matrix: n in {0,1,2}");
    if (n == 0)
        return expm(z);
    if (z.max_abs() * z.dim() < 0.1) {
        SmallMatrix term = SmallMatrix::identity(z.dim());
        double fact = 1.0;
        for (int j = 1; j <= n; ++j)
            fact /= static_cast<double>(j);
        term *= Complex(fact, 0.0);
        SmallMatrix sum = term;
        for (int j = 1; j <= 18; ++j) {
            term = term * z;
            term *= Complex(1.0 / (j + n), 0.0);
            sum += term;
        }
        return sum;
    }
    SmallMatrix zi = z.inverse();
    SmallMatrix e = expm(z);
    SmallMatrix i = SmallMatrix::identity(z.dim());
    i *= Complex(-1.0, 0.0);
    e += i; // e^Z - I
    if (n == 1)
        return zi * e;
    SmallMatrix zneg = z;
    zneg *= Complex(-1.0, 0.0);
    e += zneg; // e^Z - I - Z
    return zi * (zi * e);
}

// ---------------------------------------------------------------------------
// BlockMultiplierOperator

/// Diagonal per-component symbol lambda_c(k) = -laplacian k^2 - i transport k + shift.
struct ComponentSymbol {
    double laplacian = 0.0;
    double transport = 0.0;
    double shift = 0.0;

    Complex value(int k) const {
        const double kk = static_cast<double>(k);
        return Complex(-laplacian * kk * kk + shift, -transport * kk);
    }
};

enum class SymbolKind { DiagonalLaplacian, Shift, ConstantMatrix, Composite };

/// Mode set for inverse application.
struct ModeSet {
    bool high_only = false;
    int k0 = 0;
    static ModeSet all() { return {false, 0}; }
    static ModeSet high(int k0) { return {true, k0}; }
    bool contains(int k) const { return !high_only || std::abs(k) >= k0; }
};

class BlockMultiplierOperator {
  public:
    static BlockMultiplierOperator diagonal(std::vector<ComponentSymbol> symbols, SymbolKind kind) {
        BlockMultiplierOperator op;
        op.kind_ = kind;
        op.symbols_ = std::move(symbols);
        op.m_ = static_cast<int>(op.symbols_.size());
        bool group = true;
        double bound = -std::numeric_limits<double>::infinity();
        for (const auto& s : op.symbols_) {
            if (s.laplacian != 0.0)
                group = false; // unbounded decay: semigroup only
            bound = std::max(bound, s.laplacian > 0.0 ? s.shift : s.shift);
        }
        op.group_invertible_ = group;
        op.spectral_bound_ = bound;
        return op;
    }

    static BlockMultiplierOperator constant_matrix(const SmallMatrix& m) {
        BlockMultiplierOperator op;
        op.kind_ = SymbolKind::ConstantMatrix;
        op.matrix_ = m;
        op.m_ = m.dim();
        op.group_invertible_ = true;
        double bound = -std::numeric_limits<double>::infinity();
        for (const auto& ev : eigenvalues(m))
            bound = std::max(bound, ev.real());
        op.spectral_bound_ = bound;
        return op;
    }

    SymbolKind kind() const { return kind_; }
    int num_components() const { return m_; }
    bool group_invertible() const { return group_invertible_; }
    double spectral_bound() const { return spectral_bound_; }
    bool is_diagonal() const { return kind_ != SymbolKind::ConstantMatrix; }
    const std::vector<ComponentSymbol>& symbols() const { return symbols_; }
    const SmallMatrix& coupling_matrix() const { return matrix_; }

    Complex symbol_value(int comp, int k) const {
        require(is_diagonal(), "symbol_value: diagonal operators only");
        return symbols_[static_cast<size_t>(comp)].value(k);
    }

  private:
    SymbolKind kind_ = SymbolKind::DiagonalLaplacian;
    int m_ = 0;
    std::vector<ComponentSymbol> symbols_;
    SmallMatrix matrix_;
    bool group_invertible_ = false;
    double spectral_bound_ = 0.0;
};

// ---------------------------------------------------------------------------
// Semigroup / inverse application

/// Per mode, multiply coefficients by exp(t M(k)). t < 0 requires a group.
inline SpectralField apply_semigroup(const BlockMultiplierOperator& op, double t,
                                     const SpectralField& f) {
    require(t >= 0.0 || op.group_invertible(),
            "apply_semigroup: backward flow on a non-group operator");
    require(op.num_components() == f.num_components(), "apply_semigroup: component mismatch");
    SpectralField out = f;
    if (op.is_diagonal()) {
        for (int c = 0; c < f.num_components(); ++c)
            for (int k = -f.max_mode(); k <= f.max_mode(); ++k)
                out.at(c, k) *= std::exp(t * op.symbol_value(c, k));
    } else {
        SmallMatrix e = expm([&] {
            SmallMatrix z = op.coupling_matrix();
            z *= Complex(t, 0.0);
            return z;
        }());
        std::vector<Complex> v(static_cast<size_t>(f.num_components()));
        for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
            for (int c = 0; c < f.num_components(); ++c)
                v[static_cast<size_t>(c)] = f.at(c, k);
            auto w = e.apply(v);
            for (int c = 0; c < f.num_components(); ++c)
                out.at(c, k) = w[static_cast<size_t>(c)];
        }
    }
    out.enforce_reality();
    return out;
}

/// Backward-capable restricted semigroup: modes |k| <= kabs_max evolve by
/// exp(t M(k)), the rest are zeroed. Used for the group generated on the
/// finite slow block.
inline SpectralField apply_semigroup_low_modes(const BlockMultiplierOperator& op, double t,
                                               const SpectralField& f, int kabs_max) {
    require(op.is_diagonal(), "apply_semigroup_low_modes: diagonal operators only");
    SpectralField out = f;
    for (int c = 0; c < f.num_components(); ++c)
        for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
            if (std::abs(k) > kabs_max) {
                out.at(c, k) = Complex(0.0, 0.0);
                continue;
            }
            out.at(c, k) *= std::exp(t * op.symbol_value(c, k));
        }
    out.enforce_reality();
    return out;
}

/// Per mode in the set, multiply by M(k)^{-1}; modes outside the set zeroed.
inline SpectralField apply_resolvent_inverse(const BlockMultiplierOperator& op,
                                             const SpectralField& f, ModeSet set = ModeSet::all()) {
    require(op.num_components() == f.num_components(), "apply_resolvent_inverse: component mismatch");
    SpectralField out = f;
    if (op.is_diagonal()) {
        for (int c = 0; c < f.num_components(); ++c)
            for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
                if (!set.contains(k)) {
                    out.at(c, k) = Complex(0.0, 0.0);
                    continue;
                }
                const Complex lam = op.symbol_value(c, k);
                if (std::abs(lam) < 1e-300) {
                    std::ostringstream msg;
                    msg << "apply_resolvent_inverse: singular block at k=" << k << " component " << c;
                    throw Error(msg.str());
                }
                out.at(c, k) /= lam;
            }
    } else {
        require(std::abs(op.coupling_matrix().det()) > 0.0,
                "apply_resolvent_inverse: singular constant block");
        SmallMatrix inv = op.coupling_matrix().inverse();
        std::vector<Complex> v(static_cast<size_t>(f.num_components()));
        for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
            if (!set.contains(k)) {
                for (int c = 0; c < f.num_components(); ++c)
                    out.at(c, k) = Complex(0.0, 0.0);
                continue;
            }
            for (int c = 0; c < f.num_components(); ++c)
                v[static_cast<size_t>(c)] = f.at(c, k);
            auto w = inv.apply(v);
            for (int c = 0; c < f.num_components(); ++c)
                out.at(c, k) = w[static_cast<size_t>(c)];
        }
    }
    out.enforce_reality();
    return out;
}

/// Apply the operator itself (coefficients times M(k)).
inline SpectralField apply_operator(const BlockMultiplierOperator& op, const SpectralField& f) {
    SpectralField out = f;
    if (op.is_diagonal()) {
        for (int c = 0; c < f.num_components(); ++c)
            for (int k = -f.max_mode(); k <= f.max_mode(); ++k)
                out.at(c, k) *= op.symbol_value(c, k);
    } else {
        std::vector<Complex> v(static_cast<size_t>(f.num_components()));
        for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
            for (int c = 0; c < f.num_components(); ++c)
                v[static_cast<size_t>(c)] = f.at(c, k);
            auto w = op.coupling_matrix().apply(v);
            for (int c = 0; c < f.num_components(); ++c)
                out.at(c, k) = w[static_cast<size_t>(c)];
        }
    }
    out.enforce_reality();
    return out;
}

// ---------------------------------------------------------------------------
// Banach-scale semigroup constants

struct ScaleConstantOptions {
    int t_points = 200;
    double t_min = 1e-6;
    double t_max = 50.0;
    int k_scan = 2048;
    double safety = 1.1;
};

/// Numeric C with ||e^{tM}||_{B(X_from, X_to)} <= C t^{from-to} e^{omega t}:
/// sup over a log-spaced t-grid (plus the per-mode analytic maximizer for
/// scalar symbols) and all modes of
///   t^{to-from} e^{-omega t} (1+k^2)^{to-from} |e^{t lambda_k}| .
inline double estimate_scale_constant(const BlockMultiplierOperator& op, double alpha_from,
                                      double alpha_to, double omega,
                                      ScaleConstantOptions opt = {}) {
    require(alpha_to >= alpha_from, "estimate_scale_constant: alpha_to >= alpha_from");
    if (omega < op.spectral_bound() - 1e-12)
        throw Error("estimate_scale_constant: omega below spectral bound, sup diverges");
    const double beta = alpha_to - alpha_from;

    std::vector<double> ts;
    ts.reserve(static_cast<size_t>(opt.t_points));
    const double lr = std::log(opt.t_max / opt.t_min) / (opt.t_points - 1);
    for (int i = 0; i < opt.t_points; ++i)
        ts.push_back(opt.t_min * std::exp(lr * i));

    auto value_at = [&](double t, double re_lambda, double weight) {
        const double e = (re_lambda - omega) * t;
        return (beta > 0.0 ? std::pow(t, beta) : 1.0) * std::exp(e) * weight;
    };

    double sup = 0.0;
    if (op.is_diagonal()) {
        for (int c = 0; c < op.num_components(); ++c) {
            for (int k = 0; k <= opt.k_scan; ++k) {
                const double re = op.symbol_value(c, k).real();
                const double w = std::pow(1.0 + static_cast<double>(k) * k, beta);
                for (double t : ts)
                    sup = std::max(sup, value_at(t, re, w));
                if (beta > 0.0 && omega > re) {
                    const double tstar = beta / (omega - re);
                    sup = std::max(sup, value_at(tstar, re, w));
                }
                if (beta == 0.0)
                    sup = std::max(sup, value_at(0.0, re, w)); // t -> 0 limit is 1*w
            }
        }
    } else {
        require(beta == 0.0, "estimate_scale_constant: constant blocks need alpha_to == alpha_from");
        for (double t : ts) {
            SmallMatrix z = op.coupling_matrix();
            z *= Complex(t, 0.0);
            sup = std::max(sup, std::exp(-omega * t) * two_norm(expm(z)));
        }
        sup = std::max(sup, 1.0); // t -> 0
    }
    return opt.safety * sup;
}

/// sup_k (1+k^2)^{alpha_to-alpha_from} ||M(k)^{-1}||: the scale norm of the
/// operator inverse, exact per mode for diagonal symbols.
inline double inverse_scale_norm(const BlockMultiplierOperator& op, double alpha_from,
                                 double alpha_to, int k_scan = 4096) {
    const double beta = alpha_to - alpha_from;
    double sup = 0.0;
    if (op.is_diagonal()) {
        for (int c = 0; c < op.num_components(); ++c)
            for (int k = 0; k <= k_scan; ++k) {
                const double lam = std::abs(op.symbol_value(c, k));
                require(lam > 0.0, "inverse_scale_norm: singular symbol");
                sup = std::max(sup, std::pow(1.0 + static_cast<double>(k) * k, beta) / lam);
            }
    } else {
        require(beta == 0.0, "inverse_scale_norm: constant blocks need alpha_to == alpha_from");
        sup = two_norm(op.coupling_matrix().inverse());
    }
    return sup;
}

// ---------------------------------------------------------------------------
// SemigroupConstants

/// Constants of the abstract setting, computed per model.
struct SemigroupConstants {
    double M_A = 1.0;
    double C_A = 1.0;
    double omega_A = -1.0;
    double M_B = 1.0;
    double C_B = 1.0;
    double omega_B = 0.0;
    double omega_f = 0.0;
    double omega_g = 0.0;
    double p = 2.0; // Gronwall Hoelder index

    void check_weak_normal_hyperbolicity(double L_f, double inv_norm_max) const {
        require(omega_A < 0.0, "constants: omega_A must be negative");
        require(omega_f < 0.0, "weak normal hyperbolicity fails: omega_f >= 0");
        require(L_f * inv_norm_max < 1.0,
                "weak normal hyperbolicity fails: L_f ||A^{-1}|| >= 1");
    }
};

} // namespace slowform
