#include <catch2/catch_amalgamated.hpp>

#include "slowform/spectral.hpp"

using namespace slowform;

namespace {

SpectralField single_mode(int K, int k, Complex c, bool real_flag) {
    SpectralField f(K, 1, {real_flag});
    f.at(0, k) = c;
    if (real_flag && k != 0)
        f.at(0, -k) = std::conj(c);
    return f;
}

/// O(K^3) direct coefficient convolution for w = u*v (single component).
SpectralField convolve(const SpectralField& u, const SpectralField& v) {
    const int K = u.max_mode();
    SpectralField w(K, 1, {u.component_real(0)});
    for (int k = -K; k <= K; ++k) {
        Complex s(0.0, 0.0);
        for (int m = -K; m <= K; ++m) {
            const int j = k - m;
            if (j < -K || j > K)
                continue;
            s += u.at(0, m) * v.at(0, j);
        }
        w.at(0, k) = s;
    }
    return w;
}

} // namespace

TEST_CASE("hs_norm closed forms") {
    // single mode k=1, coeff 1, order 1 -> sqrt(2)
    auto f = single_mode(8, 1, Complex(1.0, 0.0), false);
    CHECK(hs_norm(f, 1.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));

    // zero field -> 0 at any order
    SpectralField z(8, 2, {true, false});
    CHECK(hs_norm(z, -1.3) == 0.0);
    CHECK(hs_norm(z, 2.0) == 0.0);

    // constant field c -> |c| at any order
    auto c = single_mode(8, 0, Complex(-2.5, 0.0), true);
    CHECK(hs_norm(c, 0.0) == Catch::Approx(2.5).epsilon(1e-14));
    CHECK(hs_norm(c, 3.7) == Catch::Approx(2.5).epsilon(1e-14));
    CHECK(hs_norm(c, -0.75) == Catch::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("hs_norm rejects non-finite fields") {
    auto f = single_mode(4, 1, Complex(1.0, 0.0), false);
    f.at(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(hs_norm(f, 0.0), Error);
}

TEST_CASE("Parseval: hs_norm(.,0)^2 equals grid mean square") {
    Rng rng(2024);
    auto f = random_smooth_field(16, 1, {true}, rng, 1.7, 0.0);
    const int N = 128;
    auto g = component_to_grid(f, 0, N);
    double ms = 0.0;
    for (const auto& v : g)
        ms += std::norm(v);
    ms /= static_cast<double>(N);
    const double n2 = hs_norm(f, 0.0) * hs_norm(f, 0.0);
    CHECK(std::abs(ms - n2) < 1e-12 * std::max(1.0, n2));
}

TEST_CASE("c1_norm closed forms") {
    // constant c -> |c|
    auto c = single_mode(8, 0, Complex(1.25, 0.0), true);
    CHECK(c1_norm(c) == Catch::Approx(1.25).epsilon(1e-12));

    // sin(x): modes +-1 with coeff -+ i/2 -> sup|sin| + sup|cos| = 2
    SpectralField s(8, 1, {true});
    s.at(0, 1) = Complex(0.0, -0.5);
    s.at(0, -1) = Complex(0.0, 0.5);
    CHECK(c1_norm(s) == Catch::Approx(2.0).epsilon(1e-10));

    // sin(3x) -> 1 + 3
    SpectralField s3(8, 1, {true});
    s3.at(0, 3) = Complex(0.0, -0.5);
    s3.at(0, -3) = Complex(0.0, 0.5);
    CHECK(c1_norm(s3) == Catch::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("project_modes keeps and splits") {
    SpectralField f(8, 1, {true});
    f.at(0, 0) = Complex(1.0, 0.0);
    f.at(0, 1) = Complex(0.5, 0.25);
    f.at(0, -1) = std::conj(f.at(0, 1));
    f.at(0, 5) = Complex(0.0, -1.0);
    f.at(0, -5) = std::conj(f.at(0, 5));

    auto low = project_modes(f, 3, KeepModes::Low);
    CHECK(low.at(0, 0) == f.at(0, 0));
    CHECK(low.at(0, 1) == f.at(0, 1));
    CHECK(low.at(0, 5) == Complex(0.0, 0.0));

    auto high = project_modes(f, 3, KeepModes::High);
    CHECK(high.at(0, 5) == f.at(0, 5));
    CHECK(high.at(0, 0) == Complex(0.0, 0.0));
    CHECK(high.at(0, 1) == Complex(0.0, 0.0));

    // the two parts sum to the input, and each projection is idempotent
    auto sum = low + high;
    for (int k = -8; k <= 8; ++k)
        CHECK(sum.at(0, k) == f.at(0, k));
    auto low2 = project_modes(low, 3, KeepModes::Low);
    for (int k = -8; k <= 8; ++k)
        CHECK(low2.at(0, k) == low.at(0, k));

    // threshold 0, keep=low -> zero field
    auto none = project_modes(f, 0, KeepModes::Low);
    CHECK(hs_norm(none, 0.0) == 0.0);

    CHECK_THROWS_AS(project_modes(f, 9, KeepModes::Low), Error);
}

TEST_CASE("evaluate_nonlinearity closed forms") {
    // u^2 with u = cos(x): (1+cos 2x)/2
    SpectralField u(8, 1, {true});
    u.at(0, 1) = Complex(0.5, 0.0);
    u.at(0, -1) = Complex(0.5, 0.0);
    NonlinearitySpec sq{{PolyTerm{1.0, {2}}}, 2, 0};
    auto r = evaluate_nonlinearity(sq, {&u});
    CHECK(r.at(0, 0).real() == Catch::Approx(0.5).margin(1e-14));
    CHECK(r.at(0, 2).real() == Catch::Approx(0.25).margin(1e-14));
    CHECK(r.at(0, -2).real() == Catch::Approx(0.25).margin(1e-14));
    CHECK(std::abs(r.at(0, 1)) < 1e-14);

    // u^3 with u = e^{ix}: single mode e^{3ix}
    auto e1 = single_mode(8, 1, Complex(1.0, 0.0), false);
    NonlinearitySpec cube{{PolyTerm{1.0, {3}}}, 3, 0};
    auto r3 = evaluate_nonlinearity(cube, {&e1});
    CHECK(std::abs(r3.at(0, 3) - Complex(1.0, 0.0)) < 1e-13);
    for (int k = -8; k <= 8; ++k)
        if (k != 3)
            CHECK(std::abs(r3.at(0, k)) < 1e-13);
}

TEST_CASE("cubic truncation leaves no aliased energy") {
    // u^3 with u = e^{ix} at K=2: mode 3 is truncated away; nothing may alias
    // back onto |k| <= 2.
    auto e1 = single_mode(2, 1, Complex(1.0, 0.0), false);
    NonlinearitySpec cube{{PolyTerm{1.0, {3}}}, 3, 0};
    auto r = evaluate_nonlinearity(cube, {&e1});
    for (int k = -2; k <= 2; ++k)
        CHECK(std::abs(r.at(0, k)) < 1e-14);
}

TEST_CASE("dealiased products match direct convolution") {
    Rng rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        const int K = 16;
        auto u = random_smooth_field(K, 1, {true}, rng, 1.0, 0.0, 0.3);
        auto v = random_smooth_field(K, 1, {true}, rng, 0.8, 0.0, 0.3);

        // w = u^2 * v as a cubic monomial across two fields
        NonlinearitySpec spec{{PolyTerm{1.0, {2, 1}}}, 3, 0};
        auto fast = evaluate_nonlinearity(spec, {&u, &v});

        auto uu = convolve(u, u);
        // direct convolution needs headroom: compute at 3K then truncate
        SpectralField u3(3 * K, 1, {true}), v3(3 * K, 1, {true});
        for (int k = -K; k <= K; ++k) {
            u3.at(0, k) = u.at(0, k);
            v3.at(0, k) = v.at(0, k);
        }
        auto uu3 = convolve(u3, u3);
        auto www = convolve(uu3, v3);
        double worst = 0.0;
        for (int k = -K; k <= K; ++k)
            worst = std::max(worst, std::abs(fast.at(0, k) - www.at(0, k)));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("reality is preserved by the pipeline") {
    Rng rng(99);
    auto u = random_smooth_field(12, 1, {true}, rng, 2.0, 1.0);
    CHECK(u.reality_defect() < 1e-15);

    NonlinearitySpec cube{{PolyTerm{1.0, {3}}, PolyTerm{-0.5, {1}}}, 3, 0};
    auto r = evaluate_nonlinearity(cube, {&u});
    CHECK(r.reality_defect() < 1e-13);

    auto p = project_modes(r, 4, KeepModes::High);
    CHECK(p.reality_defect() < 1e-13);
}

TEST_CASE("grid round trip is exact") {
    Rng rng(5);
    auto u = random_smooth_field(10, 1, {false}, rng, 1.0, 0.0);
    auto g = component_to_grid(u, 0, 64);
    SpectralField back(10, 1, {false});
    component_from_grid(back, 0, g);
    for (int k = -10; k <= 10; ++k)
        CHECK(std::abs(back.at(0, k) - u.at(0, k)) < 1e-13);
}
