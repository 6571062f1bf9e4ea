#pragma once

// Slow-variable splitting Y = Y_F + Y_S: threshold mode k0, decay constants
// N_F < N_S, the Lyapunov-Perron weight eta, the gap condition and the
// eps-zeta admissibility relation.

#include "slowform/bounds.hpp"

namespace slowform {

struct ModeSplitting {
    double zeta = 0.0;
    int k0 = 0;          // Fourier threshold; 0 for trivial splittings
    double N_F = 0.0;
    double N_S = 0.0;
    double eta = 0.0;
    bool trivial = false; // Y_F = {0} (group-generated B)

    double gap() const { return N_S - N_F; }

    SpectralField project_slow(const SpectralField& f) const {
        return trivial ? f : project_modes(f, k0, KeepModes::Low);
    }
    SpectralField project_fast(const SpectralField& f) const {
        if (!trivial)
            return project_modes(f, k0, KeepModes::High);
        SpectralField z = SpectralField::zeros_like(f);
        return z;
    }
};

enum class SplittingKind { Diffusive, Trivial };

/// Fourier-threshold splitting for diagonal heat-type B: k0 with
/// -(k0+1)^2 < zeta^{-1} omega_A <= -k0^2 (right-closed per the construction),
/// N_S = -zeta^{-1} omega_A - (k0-1)^2, N_F = -zeta^{-1} omega_A - k0^2.
/// Group-generated B takes the trivial splitting with
/// N_S = -zeta^{-1} omega_A + b_min, b_min = min_k Re lambda_B(k).
inline ModeSplitting compute_splitting(double zeta, double omega_A, SplittingKind kind,
                                       double b_min = 0.0) {
    require(zeta > 0.0, "compute_splitting: zeta > 0");
    require(omega_A < 0.0, "compute_splitting: omega_A < 0");
    ModeSplitting sp;
    sp.zeta = zeta;
    const double x = -omega_A / zeta; // = -zeta^{-1} omega_A > 0

    if (kind == SplittingKind::Trivial) {
        sp.trivial = true;
        sp.k0 = 0;
        sp.N_F = 0.0;
        sp.N_S = x + b_min;
        require(sp.N_S > 0.0, "compute_splitting: zeta too large for the trivial splitting");
        sp.eta = -x + 0.5 * (sp.N_S + sp.N_F);
        return sp;
    }

    // snap floating noise at exact-square boundaries so the right-closed
    // inequality -zeta^{-1} omega_A <= -k0^2 ties break as written
    int k0 = static_cast<int>(std::floor(std::sqrt(x)));
    const int kr = static_cast<int>(std::llround(std::sqrt(x)));
    if (std::abs(static_cast<double>(kr) * kr - x) <= 1e-9 * std::max(1.0, x))
        k0 = kr;
    else {
        while (static_cast<double>(k0 + 1) * (k0 + 1) <= x)
            ++k0;
        while (k0 > 0 && static_cast<double>(k0) * k0 > x)
            --k0;
    }
    if (k0 < 1)
        throw Error("compute_splitting: zeta too large (k0 < 1), no admissible splitting");
    sp.k0 = k0;
    sp.N_S = x - static_cast<double>(k0 - 1) * (k0 - 1);
    sp.N_F = x - static_cast<double>(k0) * k0;
    sp.eta = -x + 0.5 * (sp.N_S + sp.N_F);
    return sp;
}

/// 1 - [fast + Y_F + Y_S contraction terms]; positive means the
/// Lyapunov-Perron operator is an admissible contraction.
inline double gap_condition_margin(double eps, const ModeSplitting& sp,
                                   const SemigroupConstants& consts, const ScaleSetting& setting,
                                   double L_f, double L_g, double M_B_split = 1.0) {
    require(eps > 0.0 && sp.zeta > 0.0, "gap_condition_margin: eps, zeta > 0");
    const double gX = setting.gamma_X, dY = setting.delta_Y;
    const double denom1 =
        2.0 * (eps / sp.zeta - 1.0) * consts.omega_A + eps * (sp.N_S + sp.N_F);
    const double gap = sp.gap();
    if (denom1 <= 0.0 || gap <= 0.0)
        throw Error("gap_condition_margin: non-positive denominator, parameters inadmissible");
    const double term1 =
        std::pow(2.0, gX) * L_f * consts.C_A * std::tgamma(gX) / std::pow(denom1, gX);
    const double term2 = std::pow(2.0, dY) * L_g * consts.C_B * std::tgamma(dY) / std::pow(gap, dY);
    const double term3 =
        2.0 * std::pow(sp.zeta, dY - 1.0) * L_g * M_B_split * std::tgamma(dY) / gap;
    return 1.0 - (term1 + term2 + term3);
}

/// Largest eps covered by the distance-estimate hypothesis:
/// eps < c zeta ((L_f C_A Gamma(gamma_X))^{1/gamma_X} + omega_A) / omega_A.
inline double max_epsilon_for_zeta(double zeta, const SemigroupConstants& consts,
                                   const ScaleSetting& setting, double L_f, double c) {
    require(c > 0.0 && c < 1.0, "max_epsilon_for_zeta: c in (0,1)");
    const double gX = setting.gamma_X;
    const double core = std::pow(L_f * consts.C_A * std::tgamma(gX), 1.0 / gX);
    return c * zeta * (core + consts.omega_A) / consts.omega_A;
}

} // namespace slowform
