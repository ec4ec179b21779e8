// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gel/checks.hpp"

using namespace gel;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail, double seconds) {
    std::printf("%s  %2d  %-44s %s  (%.1f s)\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// least-squares slope in log-log, written out here rather than reusing the library fit
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= x.size(), my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double min_order(const OrderStudy& s) {
    double o = INFINITY;
    for (std::size_t k = 0; k + 1 < s.error.size(); ++k) o = std::min(o, std::log2(s.error[k] / s.error[k + 1]));
    return o;
}

std::string series(const OrderStudy& s) {
    std::string d;
    for (double e : s.error) d += (d.empty() ? "" : ", ") + num(e);
    return "errors [" + d + "]";
}

template <class F>
void timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f([&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); });
}

}  // namespace

int main() {
    using LV = LagrangianVariant;

    timed([](auto el) {
        const double d = measure_homogeneous_limit(256, 2000);
        report(1, "homogeneous limit, all variants vs classical", d <= 1e-12, "max rel diff " + num(d) + " <= 1e-12", el());
    });

    timed([](auto el) {
        const double e = measure_canonical_fd(20, 1);
        report(2, "canonical fields vs finite differences", e <= 1e-6, "max rel err " + num(e) + " <= 1e-6", el());
    });

    timed([](auto el) {
        const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
        bool pass = true;
        std::string d;
        for (auto [v, f, target, tol, tag] :
             {std::tuple{LV::l1_temporal_symmetric, LV::l1_temporal_symmetric, 2.0, 0.1, "L1 temporal"},
              std::tuple{LV::l1_temporal_raw, LV::l1_temporal_raw, 2.0, 0.1, "L1 temporal raw"},
              std::tuple{LV::l1_spatial_wfe, LV::l1_spatial_wfe, 2.0, 0.1, "L1 spatial"},
              std::tuple{LV::l0_homogeneous, LV::l1_temporal_symmetric, 1.0, 0.15, "L0 temporal"},
              std::tuple{LV::l0_homogeneous, LV::l1_spatial_wfe, 1.0, 0.15, "L0 spatial"}}) {
            const SlopeFit s = measure_invariance(v, f, eps);
            const double slope = fit_slope(s.eps, s.defect);
            pass = pass && std::abs(slope - target) <= tol;
            d += std::string(d.empty() ? "" : ", ") + tag + " " + num(slope);
        }
        report(3, "gauge invariance slopes (2 +- 0.1, control ~1)", pass, d, el());
    });

    timed([](auto el) {
        const OrderStudy s = measure_noether_order();
        const double o = min_order(s);
        report(4, "Noether divergence order", o >= 1.8, "order " + num(o) + " >= 1.8, " + series(s), el());
    });

    timed([](auto el) {
        const OrderStudy s = measure_temporal_balance(-1.0);
        const OrderStudy p = measure_temporal_balance(+1.0);
        const double o = min_order(s);
        report(5, "temporal conservation balance order", o >= 1.8,
               "order " + num(o) + " >= 1.8, " + series(s) + "; Noether sign order " + num(min_order(p)), el());
    });

    timed([](auto el) {
        const OrderStudy s = measure_spatial_balance();
        const double o = min_order(s);
        report(6, "spatial conservation balance order", o >= 1.8, "order " + num(o) + " >= 1.8, " + series(s), el());
    });

    timed([](auto el) {
        const double e = measure_wfe_identities(1, 10);
        report(7, "pre-strain coupling identities", e <= 1e-8, "max rel err " + num(e) + " <= 1e-8", el());
    });

    timed([](auto el) {
        const GaugeFreedom g = measure_gauge_freedoms();
        const bool pass = g.temporal_bit_identical && g.spatial_difference <= 1e-12;
        report(8, "gauge freedoms", pass,
               std::string("u0 + const ") + (g.temporal_bit_identical ? "bit-identical" : "CHANGED") +
                   ", G0 + kappa/C rel diff " + num(g.spatial_difference) + " <= 1e-12",
               el());
    });

    timed([](auto el) {
        const ZeroFrequencyStudy z = measure_zero_frequency();
        const double power = fit_slope(z.omega, z.seff);
        bool bounded = true;
        for (std::size_t i = 0; i < z.omega.size(); ++i) bounded = bounded && z.seff[i] <= z.K * z.omega[i] * (1 + 1e-12);
        const bool pass = bounded && power >= 0.9 && z.symmetric_max <= 1e-10;
        report(9, "coupling vanishes at zero frequency", pass,
               "power " + num(power) + " >= 0.9, K " + num(z.K) + ", symmetric cell " + num(z.symmetric_max) + " <= 1e-10",
               el());
    });

    timed([](auto el) {
        // harmonic mean of the reference cell written out: 1 / (0.3/1 + 0.3/2 + 0.4/4)
        const double harmonic = 1.0 / (0.3 / 1.0 + 0.3 / 2.0 + 0.4 / 4.0);
        const double got = static_limit(reference_laminate());
        const double rel = std::abs(got - harmonic) / harmonic;
        report(10, "static limit vs harmonic mean", rel <= 1e-3, "Ceff " + num(got) + ", rel err " + num(rel) + " <= 1e-3", el());
    });

    timed([](auto el) {
        const double e = measure_oracle_equivalence();
        report(11, "polarization solve vs direct Bloch solve", e <= 1e-4, "max rel err " + num(e) + " <= 1e-4", el());
    });

    timed([](auto el) {
        const DispersionStudy d = measure_dispersion_fdtd(32, 128);
        report(12, "effective vs FDTD phase velocity", d.relative <= 0.02,
               "omega " + num(d.omega_fdtd) + ", v_fdtd " + num(d.v_fdtd) + ", v_eff " + num(d.v_effective) + ", rel " +
                   num(d.relative) + " <= 0.02",
               el());
    });

    timed([](auto el) {
        const double drift = measure_energy_drift(10000, 128);
        report(13, "energy drift, 10^4 steps at cfl 0.5", drift <= 1e-3, "drift " + num(drift) + " <= 1e-3", el());
    });

    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
