#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "gel/grid.hpp"
#include "gel/tensor_fields.hpp"

namespace testing_support {

inline gel::GridSpec periodic_1d(int n, double length = 2.0 * std::numbers::pi) {
    gel::GridSpec g;
    g.dim = 1;
    g.n = {n, 1};
    g.dx = {length / n, 1.0};
    return g;
}

inline gel::GridSpec periodic_2d(int n, double length = 2.0 * std::numbers::pi) {
    gel::GridSpec g;
    g.dim = 2;
    g.n = {n, n};
    g.dx = {length / n, length / n};
    return g;
}

/// Sum of a few low Fourier modes with random amplitudes and phases; smooth and
/// periodic on [0, 2pi)^d.
struct SmoothRandom {
    std::mt19937_64 rng;
    explicit SmoothRandom(unsigned seed) : rng(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

    gel::Field field(const gel::GridSpec& g, int components, double amplitude = 1.0) {
        struct Mode {
            int kx, ky;
            double a, ph;
        };
        std::vector<std::vector<Mode>> modes(components);
        for (auto& ms : modes)
            for (int m = 0; m < 3; ++m)
                ms.push_back({static_cast<int>(uniform(1, 3.999)), g.dim == 2 ? static_cast<int>(uniform(0, 2.999)) : 0,
                              uniform(-amplitude, amplitude), uniform(0, 2 * std::numbers::pi)});
        return gel::sample(g, components, [&](int c, double x, double y) {
            double s = 0.0;
            for (const auto& m : modes[c]) s += m.a * std::sin(m.kx * x + m.ky * y + m.ph);
            return s;
        });
    }
};

}  // namespace testing_support
