#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gel/gauge.hpp"
#include "helpers.hpp"

using namespace gel;
using testing_support::periodic_1d;
using testing_support::periodic_2d;
using testing_support::SmoothRandom;

namespace {

Model homogeneous_1d(int n, double C = 4.0, double rho = 1.0) {
    Model m;
    m.grid = periodic_1d(n);
    m.material = MaterialModel::uniform_1d(m.grid, C, rho);
    m.prestate = PreState::zero(m.grid);
    return m;
}

WaveState traveling(const GridSpec& g, double k, double w, double t) {
    return {sample(g, 1, [&](int, double x, double) { return std::sin(k * x - w * t); }),
            sample(g, 1, [&](int, double x, double) { return -w * std::cos(k * x - w * t); }), t};
}

double plane_wave_noether_rms(int n) {
    const Model m = homogeneous_1d(n);
    const double dt = 0.5 * m.grid.dx[0];
    const Field shift(1, m.grid.nodes(), 1.0);
    std::vector<Field> P;
    for (int k = 0; k < 3; ++k) {
        const WaveState s = traveling(m.grid, 1.0, 2.0, k * dt);
        P.push_back(noether_current(LagrangianVariant::l0_homogeneous, m,
                                    s, build_transform(TransformKind::translation, shift, m.grid, s, m.prestate)));
    }
    return noether_divergence(m.grid, P, dt).rms;
}

AnalyticMedium medium_1d() {
    AnalyticMedium a;
    a.dim = 1;
    a.stiffness = Expression::parse("1 + 0.3*sin(x)");
    a.density = Expression::parse("1 + 0.2*cos(x)");
    a.u0[0] = Expression::parse("0.1*sin(x - 0.5*t)");
    a.u[0] = Expression::parse("sin(x - 0.8*t) + 0.5*cos(2*x + 0.3*t)");
    return a;
}

TransformProfile profile_1d(TransformKind kind) {
    TransformProfile p;
    p.kind = kind;
    p.center = {0.3, 0.0, 0.2};
    p.width = {0.7, 1.0, 0.6};
    p.points = {96, 1, 96};
    return p;
}

}  // namespace

TEST_CASE("covariant derivatives") {
    const GridSpec g = periodic_1d(256);
    const WaveState s{sample(g, 1, [](int, double x, double) { return std::sin(x); }), Field(1, g.nodes(), 0.25), 0.0};
    const Field v0(1, g.nodes(), 0.5);
    const Field ct = cov_dt(g, s, v0);
    const Field expect = sample(g, 1, [](int, double x, double) { return 0.25 - 0.5 * std::cos(x); });
    CHECK((ct - expect).max_abs() < 1e-3);

    const Field gamma(1, g.nodes(), 0.3);
    const Field cx = cov_dx(g, s.u, gamma);
    const Field expect_x = sample(g, 1, [](int, double x, double) { return std::cos(x) + 0.3 * std::sin(x); });
    CHECK((cx - expect_x).max_abs() < 1e-3);
    CHECK_THROWS_AS(cov_dx(g, s.u, Field(2, g.nodes())), InputError);
}

TEST_CASE("transform construction") {
    const GridSpec g = periodic_1d(64);
    SmoothRandom r(3);
    const WaveState s{r.field(g, 1), r.field(g, 1), 0.0};
    PreState pre = PreState::zero(g);
    pre.v0 = r.field(g, 1, 0.2);
    const Field a = r.field(g, 1);

    const LocalTransform t = build_transform(TransformKind::temporal, a, g, s, pre, 0.1);
    const Field ct = cov_dt(g, s, pre.v0);
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        CHECK(t.dx(0, p) == 0.0);
        CHECK(t.dx(1, p) == doctest::Approx(0.1 * a(0, p)));
        CHECK(t.du(0, p) == doctest::Approx(ct(0, p) * 0.1 * a(0, p)));
    }
    const LocalTransform tr = build_transform(TransformKind::translation, a, g, s, pre);
    CHECK(tr.du.max_abs() == 0.0);
    const PreState stress_only = direct_prestate(g, Field(1, g.nodes()), pre.v0);
    CHECK_THROWS_AS(build_transform(TransformKind::spatial, a, g, s, stress_only), InputError);
    CHECK_THROWS_AS(build_transform(TransformKind::custom, a, g, s, pre), InputError);
    CHECK_THROWS_AS(build_transform(TransformKind::temporal, r.field(g, 2), g, s, pre), InputError);
}

TEST_CASE("translation current of a plane wave is divergence free to second order") {
    const double e1 = plane_wave_noether_rms(32), e2 = plane_wave_noether_rms(64);
    CHECK(e2 < 1e-2);
    CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("adding a space-time curl leaves the divergence unchanged") {
    for (int dim : {1, 2}) {
        const GridSpec g = dim == 1 ? periodic_1d(40) : periodic_2d(16);
        SmoothRandom r(11 + dim);
        const double dt = 0.07;
        std::vector<Field> P, q;
        for (int k = 0; k < 5; ++k) {
            P.push_back(r.field(g, dim + 1));
            q.push_back(r.field(g, dim == 1 ? 1 : 3));
        }
        const std::vector<Field> Pq = add_spacetime_curl(g, P, q, dt);
        REQUIRE(Pq.size() == 3);
        const auto base = noether_divergence(g, std::span(P).subspan(1, 3), dt);
        const auto with = noether_divergence(g, Pq, dt);
        REQUIRE(with.residual.size() == 1);
        CHECK((with.residual[0] - base.residual[0]).max_abs() < 1e-12 * (1.0 + base.max));
    }
}

TEST_CASE("balances on a zero field vanish and check their inputs") {
    Model m = homogeneous_1d(32);
    m.prestate.v0 = Field(1, m.grid.nodes(), 0.3);
    std::vector<WaveState> tr;
    for (int k = 0; k < 4; ++k) tr.push_back({Field(1, m.grid.nodes()), Field(1, m.grid.nodes()), 0.1 * k});
    const BalanceSeries b = conservation_temporal(m, tr);
    REQUIRE(b.t.size() == 2);
    CHECK(b.max_defect == 0.0);
    CHECK(b.scale == 0.0);

    CHECK_THROWS_AS(conservation_temporal(m, std::span(tr).first(2)), InputError);
    Model no_gamma = m;
    no_gamma.prestate = direct_prestate(m.grid, Field(1, m.grid.nodes()), m.prestate.v0);
    CHECK_THROWS_AS(conservation_spatial(no_gamma, tr), InputError);
    Model fixed = m;
    fixed.grid.bc = Boundary::fixed_displacement;
    CHECK_THROWS_AS(conservation_temporal(fixed, tr), InputError);
    CHECK_THROWS_AS(conservation_temporal(fixed, tr, IndexBox{{0, 0}, {10, 0}}), InputError);
}

TEST_CASE("temporal balance without background velocity reduces to the rate of the Lagrangian") {
    Model m = homogeneous_1d(64, 1.0, 1.0);
    m.prestate.v0 = Field(1, m.grid.nodes());
    const double dt = 0.01;
    std::vector<WaveState> tr;
    for (int k = 0; k < 3; ++k) {
        const double t = 0.3 + k * dt;
        tr.push_back({sample(m.grid, 1, [&](int, double x, double) { return std::sin(x) * std::cos(t); }),
                      sample(m.grid, 1, [&](int, double x, double) { return -std::sin(x) * std::sin(t); }), t});
    }
    const BalanceSeries b = conservation_temporal(m, tr, IndexBox{{5, 0}, {20, 0}});
    double I0 = 0.0, I2 = 0.0;
    const Field L0 = density_field(LagrangianVariant::l1_temporal_symmetric, m, tr[0]);
    const Field L2 = density_field(LagrangianVariant::l1_temporal_symmetric, m, tr[2]);
    for (int i = 5; i <= 20; ++i) {
        I0 += L0(0, i) * m.grid.dx[0];
        I2 += L2(0, i) * m.grid.dx[0];
    }
    REQUIRE(b.lhs.size() == 1);
    CHECK(b.lhs[0] == doctest::Approx((I2 - I0) / (2 * dt)).epsilon(1e-12));
    CHECK(b.rhs[0] == 0.0);
}

TEST_CASE("log-log slope") {
    const std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
    CHECK(loglog_slope(x, y) == doctest::Approx(2.0));
    CHECK_THROWS_AS(loglog_slope(x, std::vector<double>{1, 2}), InputError);
}

TEST_CASE("temporal gauge: matched Lagrangian has a second-order action defect") {
    const std::vector<double> eps{4e-3, 2e-3, 1e-3};
    const auto matched = defect_slope(LagrangianVariant::l1_temporal_symmetric, medium_1d(),
                                      LagrangianVariant::l1_temporal_symmetric, profile_1d(TransformKind::temporal), eps);
    const auto plain = defect_slope(LagrangianVariant::l0_homogeneous, medium_1d(),
                                    LagrangianVariant::l1_temporal_symmetric, profile_1d(TransformKind::temporal), eps);
    MESSAGE("matched slope " << matched.slope << " plain slope " << plain.slope);
    CHECK(matched.slope > 1.8);
    CHECK(plain.slope == doctest::Approx(1.0).epsilon(0.1));
    CHECK(plain.defect.back() > 10.0 * matched.defect.back());
}

TEST_CASE("spatial gauge: matched Lagrangian has a second-order action defect") {
    const std::vector<double> eps{4e-3, 2e-3, 1e-3};
    const auto matched = defect_slope(LagrangianVariant::l1_spatial_wfe, medium_1d(), LagrangianVariant::l1_spatial_wfe,
                                      profile_1d(TransformKind::spatial), eps);
    const auto plain = defect_slope(LagrangianVariant::l0_homogeneous, medium_1d(), LagrangianVariant::l1_spatial_wfe,
                                    profile_1d(TransformKind::spatial), eps);
    MESSAGE("matched slope " << matched.slope << " plain slope " << plain.slope);
    CHECK(matched.slope > 1.8);
    CHECK(plain.slope == doctest::Approx(1.0).epsilon(0.1));
}
