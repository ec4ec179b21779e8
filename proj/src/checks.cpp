#include "gel/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace gel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridSpec periodic_line(int n, double length = kTwoPi) {
    GridSpec g;
    g.dim = 1;
    g.n = {n, 1};
    g.dx = {length / n, 1.0};
    return g;
}

GridSpec periodic_square(int n, double length = kTwoPi) {
    GridSpec g;
    g.dim = 2;
    g.n = {n, n};
    g.dx = {length / n, length / n};
    return g;
}

Model homogeneous_line(int n, double C, double rho) {
    Model m;
    m.grid = periodic_line(n);
    m.material = MaterialModel::uniform_1d(m.grid, C, rho);
    m.prestate = PreState::zero(m.grid);
    return m;
}

WaveState traveling(const GridSpec& g, double k, double w, double t) {
    return {sample(g, 1, [&](int, double x, double) { return std::sin(k * x - w * t); }),
            sample(g, 1, [&](int, double x, double) { return -w * std::cos(k * x - w * t); }), t};
}

// few low modes with random amplitudes and phases, periodic on [0, 2pi)^d
struct Smooth {
    std::mt19937_64 rng;
    explicit Smooth(unsigned seed) : rng(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

    struct Mode {
        int kx, ky;
        double a, ph;
    };
    std::vector<Mode> modes(int dim, double amplitude) {
        std::vector<Mode> ms;
        for (int i = 0; i < 3; ++i)
            ms.push_back({static_cast<int>(uniform(1, 3.999)), dim == 2 ? static_cast<int>(uniform(0, 2.999)) : 0,
                          uniform(-amplitude, amplitude), uniform(0, kTwoPi)});
        return ms;
    }
    Field field(const GridSpec& g, int components, double amplitude = 1.0) {
        std::vector<std::vector<Mode>> all;
        for (int c = 0; c < components; ++c) all.push_back(modes(g.dim, amplitude));
        return sample(g, components, [&](int c, double x, double y) {
            double s = 0.0;
            for (const auto& m : all[static_cast<std::size_t>(c)]) s += m.a * std::sin(m.kx * x + m.ky * y + m.ph);
            return s;
        });
    }
    Expression expression(int dim, double amplitude) {
        std::string text = "0";
        char buf[160];
        for (const auto& m : modes(dim, amplitude)) {
            std::snprintf(buf, sizeof buf, " + (%.17g)*sin(%d*x + %d*y + (%.17g))", m.a, m.kx, m.ky, m.ph);
            text += buf;
        }
        return Expression::parse(text);
    }
};

double successive_order(const std::vector<double>& e) {
    double order = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < e.size(); ++k) order = std::min(order, std::log2(e[k] / e[k + 1]));
    return order;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

double measure_homogeneous_limit(int n, int steps) {
    Model m = homogeneous_line(n, 1.0, 1.0);
    m.forces.point = PointSource{{1.0, 0.0}, {1.0, 0.0}, 1.0, 1.0, 1.0};
    const WaveState zero{Field(1, m.grid.nodes()), Field(1, m.grid.nodes()), 0.0};
    const SolverConfig cfg{0.5, 20, false, {}, 1e6};
    const Trajectory ref = Solver(m, ModelVariant::classical, cfg).simulate(zero, steps);
    double worst = 0.0;
    for (auto v : {ModelVariant::willis_temporal, ModelVariant::willis_temporal_raw, ModelVariant::wfe}) {
        Model mm = m;
        if (v == ModelVariant::wfe)
            mm.prestate = derive_prestate_from_gradient(m.grid, m.material, Field(1, m.grid.nodes(), 0.05));
        const Trajectory tr = Solver(mm, v, cfg).simulate(zero, steps);
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
            const double scale = ref.snapshots[k].u.max_abs();
            if (scale == 0.0) {
                worst = std::max(worst, tr.snapshots[k].u.max_abs());
                continue;
            }
            worst = std::max(worst, (tr.snapshots[k].u - ref.snapshots[k].u).max_abs() / scale);
        }
    }
    return worst;
}

double measure_canonical_fd(int draws, unsigned seed) {
    Smooth rnd(seed);
    double worst = 0.0;
    for (int dim : {1, 2}) {
        const GridSpec g = dim == 1 ? periodic_line(128) : periodic_square(32);
        for (int k = 0; k < draws; ++k) {
            Model m;
            m.grid = g;
            if (dim == 1) {
                m.material = MaterialModel::uniform_1d(g, 1.0, 1.0);
                m.material.C += rnd.field(g, 1, 0.2);
                m.material.rho += rnd.field(g, 1, 0.2);
            } else {
                m.material = MaterialModel::isotropic(g, rnd.uniform(0.5, 1.5), rnd.uniform(0.5, 1.0),
                                                      rnd.uniform(0.8, 1.5));
            }
            m.prestate = derive_prestate(g, m.material, rnd.field(g, dim, 0.1), rnd.field(g, dim, 0.3));
            m.forces.pattern = rnd.field(g, dim, 0.5);
            m.forces.signature = [](double t) { return std::cos(t); };
            const WaveState s{rnd.field(g, dim), rnd.field(g, dim), rnd.uniform(0.0, 1.0)};
            for (auto v : kAllLagrangians) {
                const CanonicalFields c = canonical_fields(v, m, s);
                worst = std::max(worst, max_relative_difference(-1.0 * c.fbar, fd_functional_derivative(v, m, s, Argument::u)));
                worst = std::max(worst, max_relative_difference(c.sbar, fd_functional_derivative(v, m, s, Argument::grad)));
                worst = std::max(worst, max_relative_difference(-1.0 * c.pbar, fd_functional_derivative(v, m, s, Argument::udot)));
            }
        }
    }
    return worst;
}

SlopeFit measure_invariance(LagrangianVariant v, LagrangianVariant forcing, const std::vector<double>& eps) {
    AnalyticMedium a;
    a.dim = 1;
    a.stiffness = Expression::parse("1 + 0.3*sin(x)");
    a.density = Expression::parse("1 + 0.2*cos(x)");
    a.u0[0] = Expression::parse("0.1*sin(x - 0.5*t)");
    a.u[0] = Expression::parse("sin(x - 0.8*t) + 0.5*cos(2*x + 0.3*t)");
    TransformProfile p;
    p.kind = forcing == LagrangianVariant::l1_spatial_wfe ? TransformKind::spatial : TransformKind::temporal;
    p.center = {0.3, 0.0, 0.2};
    p.width = {0.7, 1.0, 0.6};
    p.points = {96, 1, 96};
    return defect_slope(v, a, forcing, p, eps);
}

OrderStudy measure_noether_order() {
    OrderStudy st;
    for (int n : {32, 64, 128}) {
        Model m = homogeneous_line(n, 4.0, 1.0);
        m.grid.dt = 0.25 * m.grid.dx[0];  // c = 2, Courant 0.5
        const Solver s(m, ModelVariant::classical, SolverConfig{0.5, 1, false, {}, 1e6});
        const int steps = static_cast<int>(std::lround(0.5 / s.dt()));
        const Trajectory tr = s.simulate(traveling(m.grid, 1.0, 2.0, 0.0), steps);
        const Field shift(1, m.grid.nodes(), 1.0);
        std::vector<Field> P;
        for (std::size_t k = tr.snapshots.size() - 3; k < tr.snapshots.size(); ++k) {
            const WaveState& w = tr.snapshots[k];
            P.push_back(noether_current(LagrangianVariant::l0_homogeneous, m, w,
                                        build_transform(TransformKind::translation, shift, m.grid, w, m.prestate)));
        }
        st.n.push_back(n);
        st.error.push_back(noether_divergence(m.grid, P, s.dt()).rms);
    }
    st.order = successive_order(st.error);
    return st;
}

namespace {

Trajectory balance_run(const Model& m, ModelVariant v) {
    const Solver s(m, v, SolverConfig{0.5, 1, false, {}, 1e6});
    const int steps = static_cast<int>(std::lround(1.0 / s.dt()));
    // no mirror symmetry: with an even field and odd Gamma the spatial density integrates to zero
    const WaveState init{sample(m.grid, 1, [](int, double x, double) { return std::exp(std::cos(x)) + 0.3 * std::sin(2 * x); }),
                         Field(1, m.grid.nodes()), 0.0};
    return s.simulate(init, steps);
}

}  // namespace

OrderStudy measure_temporal_balance(double sign) {
    OrderStudy st;
    for (int n : {64, 128, 256}) {
        Model m = homogeneous_line(n, 1.0, 1.0);
        m.prestate.v0 = sample(m.grid, 1, [](int, double x, double) { return 0.2 * std::sin(x); });
        m.grid.dt = 1.0 / std::ceil(2.0 / m.grid.dx[0]);  // lands on t = 1
        const Trajectory tr = balance_run(m, ModelVariant::willis_temporal);
        const BalanceSeries b = conservation_temporal(m, tr.snapshots, std::nullopt, sign);
        st.n.push_back(n);
        st.error.push_back(b.max_defect);
        st.note = "scale " + fmt(b.scale);
    }
    st.order = successive_order(st.error);
    return st;
}

OrderStudy measure_spatial_balance() {
    OrderStudy st;
    for (int n : {64, 128, 256}) {
        Model m = homogeneous_line(n, 1.0, 1.0);
        const Field u0 = sample(m.grid, 1, [](int, double x, double) { return 0.1 * std::sin(x); });
        m.prestate = derive_prestate(m.grid, m.material, u0);
        m.grid.dt = 1.0 / std::ceil(2.0 / m.grid.dx[0]);
        const Trajectory tr = balance_run(m, ModelVariant::wfe);
        const BalanceSeries b = conservation_spatial(m, tr.snapshots);
        st.n.push_back(n);
        st.error.push_back(b.max_defect);
        st.note = "scale " + fmt(b.scale);
    }
    st.order = successive_order(st.error);
    return st;
}

double measure_wfe_identities(unsigned seed, int draws) {
    constexpr int d = 2;
    using V = Expression::Var;
    const V axes[2] = {V::x, V::y};
    Smooth rnd(seed);
    double worst = 0.0;
    for (int k = 0; k < draws; ++k) {
        const double lam = rnd.uniform(0.5, 1.5), mu = rnd.uniform(0.5, 1.0);
        auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
        auto Cf = [&](int i, int j, int a, int b) {
            return lam * delta(i, j) * delta(a, b) + mu * (delta(i, a) * delta(j, b) + delta(i, b) * delta(j, a));
        };
        const Expression u0[2] = {rnd.expression(d, 0.1), rnd.expression(d, 0.1)};
        // sigma0 as an expression, then differentiated symbolically
        Expression sig[2][2];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        if (Cf(i, j, a, b) != 0.0)
                            sig[i][j] = sig[i][j] + Expression::constant(Cf(i, j, a, b)) * u0[a].derivative(axes[b]);
        const double x = rnd.uniform(0, kTwoPi), y = rnd.uniform(0, kTwoPi);

        PointParams p;
        p.dim = d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                p.rho[idx2(d, i, j)] = delta(i, j);
                p.sigma0[idx2(d, i, j)] = sig[i][j](x, y);
                for (int a = 0; a < d; ++a) {
                    p.gamma[idx3(d, i, j, a)] = u0[i].derivative(axes[j]).derivative(axes[a])(x, y);
                    for (int b = 0; b < d; ++b) p.C[idx4(d, i, j, a, b)] = Cf(i, j, a, b);
                }
            }
        for (int i = 0; i < d; ++i) {
            Expression divi = sig[i][0].derivative(V::x) + sig[i][1].derivative(V::y);
            p.fbar0[i] = -divi(x, y);
            for (int a = 0; a < d; ++a) p.fbar0_grad[idx2(d, i, a)] = -divi.derivative(axes[a])(x, y);
        }

        // bilinear coefficients of the quadratic density, exact up to rounding
        auto L = [&](const Jet& j) { return eval_density(LagrangianVariant::l1_spatial_wfe, p, j).L; };
        const Jet zero{};
        double err = 0.0, scale = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int s = 0; s < d; ++s) {
                    Jet a, b, ab;
                    a.grad[idx2(d, i, j)] = 1.0;
                    b.u[s] = 1.0;
                    ab = a;
                    ab.u[s] = 1.0;
                    const double lag = L(ab) - L(a) - L(b) + L(zero);
                    const double ref = sig[i][j].derivative(axes[s])(x, y);
                    err = std::max(err, std::abs(lag - ref));
                    scale = std::max(scale, std::abs(ref));
                }
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < d; ++s) {
                Jet a, b, ab;
                a.u[r] += 1.0;
                b.u[s] += 1.0;
                ab.u[r] += 1.0;
                ab.u[s] += 1.0;
                const double lag = L(ab) - L(a) - L(b) + L(zero);
                double ref = 0.0;
                for (int j = 0; j < d; ++j)
                    ref += 0.5 * (sig[r][j].derivative(axes[j]).derivative(axes[s])(x, y) +
                                  sig[s][j].derivative(axes[j]).derivative(axes[r])(x, y));
                err = std::max(err, std::abs(lag - ref));
                scale = std::max(scale, std::abs(ref));
            }
        worst = std::max(worst, err / scale);
    }
    return worst;
}

GaugeFreedom measure_gauge_freedoms() {
    GaugeFreedom out;
    {
        const GridSpec g = periodic_square(24);
        const MaterialModel mat = MaterialModel::isotropic(g, 1.2, 0.7, 1.3);
        Smooth rnd(7);
        const Field u0 = rnd.field(g, 2, 0.1), v0 = rnd.field(g, 2, 0.3);
        Model a, b;
        a.grid = b.grid = g;
        a.material = b.material = mat;
        a.prestate = derive_prestate(g, mat, u0, v0);
        Field shifted = u0;
        for (std::size_t p = 0; p < g.nodes(); ++p) {
            shifted(0, p) += 0.37;
            shifted(1, p) -= 1.25;
        }
        b.prestate = derive_prestate(g, mat, shifted, v0);
        const CouplingFields ca = coupling_fields(a, ModelVariant::willis_temporal);
        const CouplingFields cb = coupling_fields(b, ModelVariant::willis_temporal);
        out.temporal_bit_identical = ca.stress == cb.stress && ca.rate == cb.rate;
    }
    {
        // 1D: (C D)_,x = 0 for D = kappa / C
        const GridSpec g = periodic_line(128);
        const MaterialModel mat = MaterialModel::profile_1d(
            g, [](double x) { return 1.0 + 0.3 * std::sin(x); }, [](double x) { return 1.0 + 0.2 * std::cos(x); });
        const Field G0 = sample(g, 1, [](int, double x, double) { return 0.1 * std::cos(x) + 0.02 * std::sin(2 * x); });
        Field G1 = G0;
        for (std::size_t p = 0; p < g.nodes(); ++p) G1(0, p) += 0.25 / mat.C(0, p);
        Model a, b;
        a.grid = b.grid = g;
        a.material = b.material = mat;
        a.prestate = derive_prestate_from_gradient(g, mat, G0);
        b.prestate = derive_prestate_from_gradient(g, mat, G1);
        const CouplingFields ca = coupling_fields(a, ModelVariant::wfe);
        const CouplingFields cb = coupling_fields(b, ModelVariant::wfe);
        out.spatial_difference = std::max(max_relative_difference(ca.stress, cb.stress),
                                          max_relative_difference(ca.restoring, cb.restoring));
    }
    return out;
}

LaminateSpec reference_laminate() { return LaminateSpec::layered({{1, 1}, {2, 3}, {4, 2}}, {0.3, 0.3, 0.4}); }

LaminateSpec symmetric_laminate() {
    LaminateSpec l;
    l.phases = {{1, 1}, {3, 2}};
    l.profile = {{0, 0.25}, {1, 0.5}, {0, 0.25}};
    return l;
}

ZeroFrequencyStudy measure_zero_frequency() {
    ZeroFrequencyStudy z;
    const LaminateSpec l = reference_laminate();
    for (int i = 0; i <= 8; ++i) {
        const double w = 0.01 * std::pow(10.0, i / 4.0);
        z.omega.push_back(w);
        z.seff.push_back(std::abs(effective_operators(l, {w, 0.0, 32}).Seff));
        z.K = std::max(z.K, z.seff.back() / w);
    }
    z.power = loglog_slope(z.omega, z.seff);
    for (double w : {0.05, 0.5, 2.0}) {
        const EffectiveOperators e = effective_operators(symmetric_laminate(), {w, 0.0, 32});
        z.symmetric_max = std::max({z.symmetric_max, std::abs(e.Seff), std::abs(e.Shat)});
    }
    return z;
}

double measure_static_limit(const LaminateSpec& l) {
    const double h = harmonic_stiffness(l);
    return std::abs(static_limit(l) - h) / h;
}

double measure_oracle_equivalence() {
    const LaminateSpec l = reference_laminate();
    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::abs(b); };
    double worst = 0.0;
    for (double w : {0.3, 1.0, 2.5})
        for (double q : {0.0, 0.6})
            for (auto [eb, vb] : {std::pair<cplx, cplx>{1.0, 0.0}, {0.0, 1.0}, {0.3, cplx(0.0, -0.8)}}) {
                const MeanResponse a = mean_response(l, {w, q, 32}, eb, vb);
                const MeanResponse d = direct_bloch_response(l, w, q, eb, vb, 4096);
                worst = std::max({worst, rel(a.sigma, d.sigma), rel(a.p, d.p)});
            }
    return worst;
}

double measure_reciprocity() {
    double worst = 0.0;
    for (double w : {0.1, 0.7, 2.0})
        for (double q : {-0.8, 0.0, 0.5}) {
            const EffectiveOperators e = effective_operators(reference_laminate(), {w, q, 32});
            worst = std::max(worst, std::abs(e.Shat + std::conj(e.Seff)) / std::abs(e.Seff));
        }
    return worst;
}

DispersionStudy measure_dispersion_fdtd(int cells, int points_per_cell) {
    const LaminateSpec l = reference_laminate();
    const int n = cells * points_per_cell;
    const GridSpec g = periodic_line(n, cells * l.cell_length);
    auto phase_at = [&](double x) -> const Phase& {
        double s = std::fmod(x, l.cell_length) / l.cell_length;
        for (const Segment& seg : l.profile) {
            if (s < seg.fraction) return l.phases[static_cast<std::size_t>(seg.phase)];
            s -= seg.fraction;
        }
        return l.phases[static_cast<std::size_t>(l.profile.back().phase)];
    };
    Model m;
    m.grid = g;
    m.material = MaterialModel::profile_1d(
        g, [&](double x) { return phase_at(x).C; }, [&](double x) { return phase_at(x).rho; });
    m.prestate = PreState::zero(g);
    const Solver s(m, ModelVariant::classical, SolverConfig{0.5, 1, false, {}, 1e6});

    const double K = kTwoPi / g.length(0);
    const Field mode = sample(g, 1, [&](int, double x, double) { return std::sin(K * x); });
    auto project = [&](const Field& u) {
        double a = 0.0;
        for (std::size_t p = 0; p < g.nodes(); ++p) a += u(0, p) * mode(0, p);
        return a;
    };
    // standing mode: projection ~ cos(w t), crossings at pi/2w and 3pi/2w
    LeapfrogState st = s.start({mode, Field(1, g.nodes()), 0.0});
    double prev = project(st.u), t_prev = s.time_of(st.step);
    std::vector<double> crossings;
    const int max_steps = static_cast<int>(4.0 * std::numbers::pi / (0.5 * K) / s.dt());  // speeds here exceed 0.5
    while (crossings.size() < 2 && st.step < max_steps) {
        s.step(st);
        const double a = project(st.u), t = s.time_of(st.step);
        if ((a < 0.0) != (prev < 0.0)) crossings.push_back(t_prev + (t - t_prev) * prev / (prev - a));
        prev = a;
        t_prev = t;
    }
    DispersionStudy d;
    if (crossings.size() < 2) throw NumericalError("standing mode did not complete a half period");
    d.omega_fdtd = std::numbers::pi / (crossings[1] - crossings[0]);
    d.v_fdtd = d.omega_fdtd / K;
    const std::vector<double> w{d.omega_fdtd};
    d.v_effective = effective_dispersion(l, w, 32).front().v_phase;
    d.relative = std::abs(d.v_fdtd - d.v_effective) / d.v_effective;
    return d;
}

double measure_energy_drift(int steps, int n) {
    const Model m = homogeneous_line(n, 1.0, 1.0);
    const Solver s(m, ModelVariant::classical, SolverConfig{0.5, 10, true, {}, 1e6});
    const Trajectory tr = s.simulate(traveling(m.grid, 2.0, 2.0, 0.0), steps);
    const auto& e = tr.monitors.at("energy");
    double drift = 0.0;
    for (double v : e) drift = std::max(drift, std::abs(v - e.front()) / e.front());
    return drift;
}

namespace {

struct Outcome {
    double measured = 0.0;
    std::string detail;
};

struct CheckDef {
    std::string suite;
    std::string name;
    std::string reference;
    double tolerance;
    bool at_least;
    std::function<Outcome(unsigned seed)> run;
};

std::string list(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : " ") + fmt(x);
    return s;
}

Outcome slope_outcome(LagrangianVariant v, LagrangianVariant forcing, double target) {
    const SlopeFit f = measure_invariance(v, forcing, {1e-2, 1e-3, 1e-4, 1e-5});
    return {std::abs(f.slope - target), "slope " + fmt(f.slope) + ", defects " + list(f.defect)};
}

Outcome order_outcome(const OrderStudy& st) {
    std::string d = "errors " + list(st.error) + " at n =";
    for (int n : st.n) d += " " + std::to_string(n);
    if (!st.note.empty()) d += ", " + st.note;
    return {st.order, d};
}

// Density of each L1 variant at zero pre-fields against L0 on random jets.
Outcome l1_to_l0(unsigned seed) {
    Smooth rnd(seed);
    double worst = 0.0;
    for (int d : {1, 2})
        for (int k = 0; k < 20; ++k) {
            PointParams p;
            p.dim = d;
            const double lam = rnd.uniform(0.5, 1.5), mu = rnd.uniform(0.3, 1.0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    p.rho[idx2(d, i, j)] = i == j ? rnd.uniform(0.5, 2.0) : 0.0;
                    p.sigma0[idx2(d, i, j)] = i <= j ? rnd.uniform(-0.3, 0.3) : p.sigma0[idx2(d, j, i)];
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b)
                            p.C[idx4(d, i, j, a, b)] = lam * (i == j) * (a == b) + mu * ((i == a) * (j == b) + (i == b) * (j == a));
                }
            for (int i = 0; i < d; ++i) {
                p.fbar0[i] = rnd.uniform(-0.5, 0.5);
                p.f[i] = rnd.uniform(-0.5, 0.5);
            }
            Jet j;
            for (int i = 0; i < d; ++i) {
                j.u[i] = rnd.uniform(-1, 1);
                j.udot[i] = rnd.uniform(-1, 1);
                for (int a = 0; a < d; ++a) j.grad[idx2(d, i, a)] = rnd.uniform(-1, 1);
            }
            const double L0 = eval_density(LagrangianVariant::l0_homogeneous, p, j).L;
            for (auto v : kAllLagrangians)
                worst = std::max(worst, std::abs(eval_density(v, p, j).L - L0) / std::max(1.0, std::abs(L0)));
        }
    return {worst, "max |L1 - L0| with v0 = 0, Gamma = 0"};
}

const std::vector<CheckDef>& registry() {
    using LV = LagrangianVariant;
    static const std::vector<CheckDef> defs = {
        {"euler-lagrange", "canonical_fd", "canonical fields vs finite differences", 1e-6, false,
         [](unsigned seed) { return Outcome{measure_canonical_fd(20, seed), "20 draws, d = 1 and 2, all Lagrangians"}; }},
        {"euler-lagrange", "wfe_identities", "pre-strain coupling identities", 1e-8, false,
         [](unsigned seed) { return Outcome{measure_wfe_identities(seed, 10), "Hessian of the density vs grad sigma0"}; }},

        {"invariance", "temporal_symmetric_slope", "temporal gauge invariance", 0.1, false,
         [](unsigned) { return slope_outcome(LV::l1_temporal_symmetric, LV::l1_temporal_symmetric, 2.0); }},
        {"invariance", "temporal_raw_slope", "temporal gauge invariance", 0.1, false,
         [](unsigned) { return slope_outcome(LV::l1_temporal_raw, LV::l1_temporal_raw, 2.0); }},
        {"invariance", "spatial_slope", "spatial gauge invariance", 0.1, false,
         [](unsigned) { return slope_outcome(LV::l1_spatial_wfe, LV::l1_spatial_wfe, 2.0); }},
        {"invariance", "control_temporal_slope", "L0 negative control", 0.15, false,
         [](unsigned) { return slope_outcome(LV::l0_homogeneous, LV::l1_temporal_symmetric, 1.0); }},
        {"invariance", "control_spatial_slope", "L0 negative control", 0.15, false,
         [](unsigned) { return slope_outcome(LV::l0_homogeneous, LV::l1_spatial_wfe, 1.0); }},
        {"invariance", "temporal_translation_freedom", "rigid translation of u0", 1.0, true,
         [](unsigned) {
             const bool same = measure_gauge_freedoms().temporal_bit_identical;
             return Outcome{same ? 1.0 : 0.0, same ? "bit-identical" : "coefficients changed"};
         }},
        {"invariance", "spatial_gradient_freedom", "pre-strain gradient freedom", 1e-12, false,
         [](unsigned) { return Outcome{measure_gauge_freedoms().spatial_difference, "G0 + kappa/C, 1D"}; }},

        {"conservation", "noether_order", "time-translation current", 1.8, true,
         [](unsigned) { return order_outcome(measure_noether_order()); }},
        {"conservation", "temporal_balance_order", "temporal balance", 1.8, true,
         [](unsigned) { return order_outcome(measure_temporal_balance(-1.0)); }},
        {"conservation", "temporal_balance_order_plus", "temporal balance, Noether sign", 1.8, true,
         [](unsigned) { return order_outcome(measure_temporal_balance(+1.0)); }},
        {"conservation", "spatial_balance_order", "spatial balance", 1.8, true,
         [](unsigned) { return order_outcome(measure_spatial_balance()); }},
        {"conservation", "energy_drift", "energy conservation", 1e-3, false,
         [](unsigned) { return Outcome{measure_energy_drift(), "10^4 steps, cfl 0.5"}; }},

        {"homogenizer", "zero_frequency_power", "coupling vanishes at zero frequency", 0.9, true,
         [](unsigned) {
             const ZeroFrequencyStudy z = measure_zero_frequency();
             return Outcome{z.power, "K = " + fmt(z.K)};
         }},
        {"homogenizer", "symmetric_coupling", "mirror-symmetric cell", 1e-10, false,
         [](unsigned) { return Outcome{measure_zero_frequency().symmetric_max, "max |Seff|, |Shat| at q = 0"}; }},
        {"homogenizer", "static_limit", "harmonic mean", 1e-3, false,
         [](unsigned) { return Outcome{measure_static_limit(reference_laminate()), "reference cell"}; }},
        {"homogenizer", "oracle", "direct Bloch solve", 1e-4, false,
         [](unsigned) { return Outcome{measure_oracle_equivalence(), "N = 32 vs 4096 points"}; }},
        {"homogenizer", "reciprocity", "Shat = -conj(Seff)", 1e-8, false,
         [](unsigned) { return Outcome{measure_reciprocity(), "3 x 3 (omega, q) grid"}; }},
        {"homogenizer", "dispersion", "effective vs FDTD phase velocity", 0.02, false,
         [](unsigned) {
             const DispersionStudy d = measure_dispersion_fdtd();
             return Outcome{d.relative, "omega " + fmt(d.omega_fdtd) + ", v_fdtd " + fmt(d.v_fdtd) + ", v_eff " +
                                            fmt(d.v_effective)};
         }},

        {"limits", "homogeneous_wavefield", "all variants reduce to classical", 1e-12, false,
         [](unsigned) { return Outcome{measure_homogeneous_limit(), "n = 256, 2000 steps, Ricker source"}; }},
        {"limits", "l1_to_l0", "zero pre-fields", 1e-14, false, l1_to_l0},
        {"limits", "uniform_cell", "zero contrast", 1e-13, false,
         [](unsigned) {
             const EffectiveOperators e = effective_operators(LaminateSpec::layered({{2.0, 3.0}}, {1.0}), {0.7, 0.3, 16});
             return Outcome{std::abs(e.Ceff - 2.0) + std::abs(e.rhoeff - 3.0) + std::abs(e.Seff) + std::abs(e.Shat),
                            "C = 2, rho = 3"};
         }},
        {"limits", "single_phase_static", "single phase", 1e-13, false,
         [](unsigned) {
             return Outcome{measure_static_limit(LaminateSpec::layered({{2.5, 1.0}}, {1.0})), "C = 2.5"};
         }},
    };
    return defs;
}

}  // namespace

std::map<std::string, std::vector<std::string>> check_catalog() {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& d : registry()) out[d.suite].push_back(d.name);
    return out;
}

VerifyReport run_suites(const std::vector<std::string>& suites, const std::map<std::string, double>& tolerances,
                        unsigned seed) {
    const auto catalog = check_catalog();
    for (const auto& s : suites)
        if (!catalog.count(s)) throw InputError("unknown verify suite '" + s + "'");
    for (const auto& [name, tol] : tolerances) {
        const bool known = std::any_of(registry().begin(), registry().end(), [&](const CheckDef& d) { return d.name == name; });
        if (!known) throw InputError("unknown check '" + name + "' in tolerances");
        if (!(tol >= 0.0)) throw InputError("tolerance for '" + name + "' must be non-negative");
    }
    VerifyReport rep;
    for (const auto& d : registry()) {
        if (!suites.empty() && std::find(suites.begin(), suites.end(), d.suite) == suites.end()) continue;
        CheckRecord r;
        r.suite = d.suite;
        r.name = d.name;
        r.reference = d.reference;
        r.at_least = d.at_least;
        const auto t = tolerances.find(d.name);
        r.tolerance = t != tolerances.end() ? t->second : d.tolerance;
        try {
            const Outcome o = d.run(seed);
            r.measured = o.measured;
            r.detail = o.detail;
            r.pass = std::isfinite(o.measured) && (d.at_least ? o.measured >= r.tolerance : o.measured <= r.tolerance);
        } catch (const std::exception& e) {
            r.measured = std::numeric_limits<double>::quiet_NaN();
            r.detail = std::string("error: ") + e.what();
            r.pass = false;
        }
        (r.pass ? rep.passed : rep.failed) += 1;
        rep.checks.push_back(std::move(r));
    }
    return rep;
}

}  // namespace gel
