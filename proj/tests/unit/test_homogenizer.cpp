#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "gel/homogenizer.hpp"

using namespace gel;
constexpr double pi = std::numbers::pi;

namespace {

LaminateSpec asymmetric() { return LaminateSpec::layered({{1, 1}, {2, 3}, {4, 2}}, {0.3, 0.3, 0.4}); }

LaminateSpec mirror_symmetric() {
    LaminateSpec l;
    l.phases = {{1, 1}, {3, 2}};
    l.profile = {{0, 0.25}, {1, 0.5}, {0, 0.25}};
    return l;
}

LaminateSpec uniform(double C, double rho) { return LaminateSpec::layered({{C, rho}}, {1.0}); }

// Bloch-periodic Green's function of Cbar G'' + rhobar w^2 G = -delta on (0, L),
// G(x + L) = e^{iqL} G(x), from the homogeneous solutions and the jump conditions.
cplx green_real_space(double Cb, double rb, double w, double q, double L, double x) {
    const double kap = w * std::sqrt(rb / Cb);
    const cplx ph = std::polar(1.0, q * L);
    // G = A cos(kap x) + B sin(kap x)
    // G(L) = ph G(0):          A (cos kL - ph) + B sin kL = 0
    // G'(0+) - G'(L-)/ph = -1/Cb:  kap B - (kap/ph)(-A sin kL + B cos kL) = -1/Cb
    const double c = std::cos(kap * L), s = std::sin(kap * L);
    Eigen::Matrix2cd M;
    M << c - ph, s, kap * s / ph, kap - kap * c / ph;
    const Eigen::Vector2cd ab = M.partialPivLu().solve(Eigen::Vector2cd(0.0, -1.0 / Cb));
    return ab(0) * std::cos(kap * x) + ab(1) * std::sin(kap * x);
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("green symbol") {
    LaminateSpec l = uniform(1.0, 1.0);
    l.cell_length = 2 * pi;
    CHECK(std::abs(green_symbol(l, {0.5, 0.0, 8}, 1) - 4.0 / 3.0) < 1e-15);
    const cplx g0 = green_symbol(l, {0.0, 0.2, 8}, 2);
    CHECK(std::abs(g0 - 1.0 / (2.2 * 2.2)) < 1e-15);
    CHECK_THROWS_AS(green_symbol(l, {1.0, 0.0, 8}, 1), HomogenizerError);
    const GreenSymbols s0 = green_operators(l, {0.5, 0.0, 8}, 0);
    CHECK(std::abs(s0.Sx) + std::abs(s0.Mx) + std::abs(s0.St) + std::abs(s0.Mt) == 0.0);
}

TEST_CASE("green symbols match the real-space Bloch Green's function") {
    LaminateSpec l = LaminateSpec::layered({{1.0, 1.0}, {3.0, 2.0}}, {0.5, 0.5}, 1.3);
    const double Cb = comparison_stiffness(l), rb = comparison_density(l), L = l.cell_length;
    const double w = 1.7, q = 0.9;
    for (int n : {-3, -1, 1, 2, 5}) {
        const double k = q + 2 * pi * n / L;
        auto part = [&](bool im) {
            return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double x) {
                    const cplx v = green_real_space(Cb, rb, w, q, L, x) * std::polar(1.0, -k * x);
                    return im ? v.imag() : v.real();
                },
                0.0, L, 10, 1e-14);
        };
        const cplx oracle(part(false), part(true));
        CHECK(rel(green_symbol(l, {w, q, 8}, n), oracle) < 1e-8);
    }
}

TEST_CASE("laminate validation") {
    LaminateSpec l = asymmetric();
    CHECK_NOTHROW(validate(l));
    l.profile[0].fraction = 0.2;
    CHECK_THROWS_AS(validate(l), HomogenizerError);
    l = asymmetric();
    l.phases[1].C = -1;
    CHECK_THROWS_AS(validate(l), HomogenizerError);
    l = asymmetric();
    l.profile[2].phase = 7;
    CHECK_THROWS_AS(validate(l), HomogenizerError);
    CHECK_THROWS_AS(effective_operators(asymmetric(), {1.0, 0.0, 4}), HomogenizerError);
}

TEST_CASE("profile coefficients are closed-form averages") {
    const LaminateSpec l = asymmetric();
    const auto g = profile_coefficients(l, [](const Phase& p) { return p.C; }, 3);
    CHECK(g[3].real() == doctest::Approx(0.3 * 1 + 0.3 * 2 + 0.4 * 4));
    // real profile: g_{-n} = conj(g_n)
    CHECK(std::abs(g[1] - std::conj(g[5])) < 1e-15);
}

TEST_CASE("homogeneous cell has no polarization") {
    const LaminateSpec l = uniform(2.0, 3.0);
    const Polarization p = solve_polarizations(l, {0.7, 0.3, 8}, Loading::mean_strain);
    CHECK(p.tau.norm() < 1e-14);
    CHECK(p.pi.norm() < 1e-14);
    const EffectiveOperators e = effective_operators(l, {0.7, 0.3, 8});
    CHECK(std::abs(e.Ceff - 2.0) < 1e-14);
    CHECK(std::abs(e.rhoeff - 3.0) < 1e-14);
    CHECK(std::abs(e.Seff) + std::abs(e.Shat) < 1e-14);
}

TEST_CASE("single-harmonic stiffness perturbation matches the hand solution") {
    // dC = 2a cos(2 pi x / L), drho = 0, modes -1..1
    const LaminateSpec l = uniform(1.0, 1.0);
    const BlochPoint b{0.4, 0.3, 1};
    const double a = 0.2;
    Perturbation p;
    p.stiffness = Eigen::MatrixXcd::Zero(3, 3);
    p.stiffness(0, 1) = p.stiffness(1, 0) = p.stiffness(1, 2) = p.stiffness(2, 1) = a;
    p.density = Eigen::MatrixXcd::Zero(3, 3);
    std::vector<GreenSymbols> s;
    for (int n = -1; n <= 1; ++n) s.push_back(green_operators(l, b, n));
    const Polarization pol = solve_polarizations(p, s, 1.0, 0.0);
    // tau_{+-1} = a, tau_0 = -a^2 (Sx_{-1} + Sx_{1})
    CHECK(std::abs(pol.tau(0) - a) < 1e-15);
    CHECK(std::abs(pol.tau(2) - a) < 1e-15);
    CHECK(std::abs(pol.tau(1) + a * a * (s[0].Sx + s[2].Sx)) < 1e-15);
    CHECK(pol.pi.norm() == 0.0);
}

TEST_CASE("static limit is the harmonic mean") {
    CHECK(static_limit(LaminateSpec::layered({{1, 1}, {3, 1}}, {0.5, 0.5})) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(static_limit(uniform(2.5, 1.0)) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(static_limit(asymmetric()) == doctest::Approx(harmonic_stiffness(asymmetric())).epsilon(1e-12));
    const double thin = static_limit(LaminateSpec::layered({{1, 1}, {3, 1}}, {1 - 1e-6, 1e-6}));
    CHECK(std::abs(thin - 1.0) < 1e-6);
}

TEST_CASE("mirror-symmetric cell has no coupling at q = 0") {
    for (double w : {0.05, 0.5, 2.0}) {
        const EffectiveOperators e = effective_operators(mirror_symmetric(), {w, 0.0, 32});
        CHECK(std::abs(e.Seff) <= 1e-10);
        CHECK(std::abs(e.Shat) <= 1e-10);
    }
    const EffectiveOperators e = effective_operators(asymmetric(), {0.5, 0.0, 32});
    CHECK(std::abs(e.Seff) > 1e-3);
}

TEST_CASE("coupling vanishes linearly at zero frequency") {
    std::vector<double> w, s;
    for (int i = 0; i <= 8; ++i) {
        w.push_back(0.01 * std::pow(10.0, i / 4.0));
        s.push_back(std::abs(effective_operators(asymmetric(), {w.back(), 0.0, 32}).Seff));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = std::log(w[i]), y = std::log(s[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(w.size());
    const double power = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    MESSAGE("fitted power " << power << ", K = " << s.front() / w.front());
    CHECK(power >= 0.9);
    CHECK(std::abs(effective_operators(asymmetric(), {0.0, 0.0, 32}).Seff) < 1e-14);
}

TEST_CASE("off-diagonal entries are negative conjugates for lossless phases") {
    for (double w : {0.1, 1.0, 2.5})
        for (double q : {-0.7, 0.0, 0.4}) {
            const EffectiveOperators e = effective_operators(asymmetric(), {w, q, 32});
            CHECK(std::abs(e.Shat + std::conj(e.Seff)) <= 1e-8 * std::abs(e.Seff));
            CHECK(std::abs(e.Ceff.imag()) < 1e-12);
            CHECK(std::abs(e.rhoeff.imag()) < 1e-12);
        }
}

TEST_CASE("truncation convergence from N = 32 to 64") {
    for (double w : {0.3, 1.5}) {
        const EffectiveOperators a = effective_operators(asymmetric(), {w, 0.4, 32});
        const EffectiveOperators b = effective_operators(asymmetric(), {w, 0.4, 64});
        CHECK(rel(a.Ceff, b.Ceff) <= 1e-6);
        CHECK(rel(a.rhoeff, b.rhoeff) <= 1e-6);
        // couplings converge as the truncated product of a kinked velocity and
        // a jumping density: about 7e-6 at N = 32
        CHECK(rel(a.Seff, b.Seff) <= 2e-5);
        CHECK(rel(a.Shat, b.Shat) <= 2e-5);
    }
}

TEST_CASE("mean fields agree with a direct Bloch solve") {
    for (double w : {0.2, 1.8})
        for (auto [eb, vb] : {std::pair<cplx, cplx>{1.0, 0.0}, {0.0, 1.0}, {0.3, cplx(0.0, -0.8)}}) {
            const MeanResponse a = mean_response(asymmetric(), {w, 0.6, 32}, eb, vb);
            const MeanResponse d = direct_bloch_response(asymmetric(), w, 0.6, eb, vb, 4096);
            CHECK(rel(a.sigma, d.sigma) <= 1e-4);
            CHECK(rel(a.p, d.p) <= 1e-4);
        }
}

TEST_CASE("second-order formulas approach the exact solve at weak contrast") {
    auto gap = [](double eps) {
        const LaminateSpec l =
            LaminateSpec::layered({{1 - eps, 1 + eps}, {1 + eps, 1 - 0.5 * eps}, {1, 1 + 0.5 * eps}}, {0.3, 0.3, 0.4});
        const BlochPoint b{0.8, 0.3, 64};
        const EffectiveOperators x = effective_operators(l, b), s = second_order_operators(l, b);
        return rel(s.Seff, x.Seff);
    };
    // Seff is O(eps^2) and the neglected terms O(eps^3): the relative gap is O(eps)
    const double g1 = gap(0.1), g2 = gap(0.05), g3 = gap(0.025);
    MESSAGE("relative Seff gap " << g1 << " -> " << g2 << " -> " << g3);
    CHECK(g2 < 0.7 * g1);
    CHECK(g3 < 0.7 * g2);
}

TEST_CASE("effective dispersion") {
    const std::vector<double> w{0.0, 0.5, 1.0};
    for (const auto& d : effective_dispersion(uniform(4.0, 1.0), w)) {
        CHECK_FALSE(d.gap);
        CHECK(d.v_phase == doctest::Approx(2.0).epsilon(1e-12));
    }
    const auto fwd = effective_dispersion(mirror_symmetric(), w, 32, +1);
    const auto bwd = effective_dispersion(mirror_symmetric(), w, 32, -1);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(std::abs(fwd[i].q + bwd[i].q) < 1e-10);
    const std::vector<double> low{0.01};
    const auto a = effective_dispersion(asymmetric(), low);
    CHECK(a[0].v_phase ==
          doctest::Approx(std::sqrt(harmonic_stiffness(asymmetric()) / mean_density(asymmetric()))).epsilon(1e-4));
}
