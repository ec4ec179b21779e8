#include <doctest.h>

#include <cmath>

#include "gel/tensor_fields.hpp"
#include "helpers.hpp"

using namespace gel;
using testing_support::periodic_1d;
using testing_support::periodic_2d;

namespace {

double gradient_error(int n) {
    const GridSpec g = periodic_1d(n);
    const Field u = sample(g, 1, [](int, double x, double) { return std::sin(2 * x); });
    const Field du = grad(g, u, 0);
    double e = 0.0;
    for (std::size_t p = 0; p < g.nodes(); ++p) e = std::max(e, std::abs(du(0, p) - 2 * std::cos(2 * g.coord(p, 0))));
    return e;
}

}  // namespace

TEST_CASE("central gradient is second order") {
    const double order = std::log2(gradient_error(64) / gradient_error(128));
    CHECK(order == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("one-sided ends are exact on quadratics") {
    GridSpec g = periodic_1d(16, 1.0);
    g.bc = Boundary::traction_free;
    const Field u = sample(g, 1, [](int, double x, double) { return 3 * x * x - x + 2; });
    const Field du = grad(g, u, 0);
    for (std::size_t p = 0; p < g.nodes(); ++p) CHECK(du(0, p) == doctest::Approx(6 * g.coord(p, 0) - 1).epsilon(1e-12));
}

TEST_CASE("isotropic material validates; broken symmetry and negative stiffness are reported") {
    const GridSpec g = periodic_2d(8);
    MaterialModel m = MaterialModel::isotropic(g, 2.0, 1.0, 1.5);
    CHECK(validate_material(g, m).pass);
    CHECK(validate_material(g, m).min_stiffness_eigenvalue == doctest::Approx(2.0));  // 2 mu
    MaterialModel bad = m;
    bad.C(idx4(2, 0, 1, 0, 1), 5) += 0.1;
    const auto r = validate_material(g, bad);
    CHECK_FALSE(r.pass);
    CHECK(r.worst_symmetry_node == 5);
    MaterialModel neg = MaterialModel::isotropic(g, 2.0, -1.0, 1.0);
    CHECK_FALSE(validate_material(g, neg).pass);
}

TEST_CASE("derived pre-state is in discrete equilibrium") {
    const GridSpec g = periodic_2d(16);
    const MaterialModel m = MaterialModel::isotropic(g, 1.0, 0.5, 1.0);
    testing_support::SmoothRandom rnd(7);
    const PreState s = derive_prestate(g, m, rnd.field(g, 2, 0.1));
    CHECK(equilibrium_residual(g, s.sigma0, s.fbar0) < 1e-13);
    CHECK(s.sigma0(idx2(2, 0, 1), 3) == doctest::Approx(s.sigma0(idx2(2, 1, 0), 3)));
    CHECK_THROWS_AS(derive_prestate(g, m, Field(1, g.nodes())), InputError);
}

TEST_CASE("torsion of an irrotational pre-displacement vanishes to truncation error") {
    auto worst = [](int n) {
        const GridSpec g = periodic_2d(n);
        // u0 = grad(phi), phi = sin(x) cos(2y)
        const Field u0 = sample(g, 2, [](int c, double x, double y) {
            return c == 0 ? std::cos(x) * std::cos(2 * y) : -2 * std::sin(x) * std::sin(2 * y);
        });
        return torsion(2, spatial_connection(g, u0)).max_abs();
    };
    const double e1 = worst(32), e2 = worst(64);
    CHECK(e2 < 0.02);
    CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("torsion of a sheared pre-displacement is nonzero") {
    const GridSpec g = periodic_2d(32);
    const Field u0 = sample(g, 2, [](int c, double, double y) { return c == 0 ? std::sin(y) : 0.0; });
    const Field gamma = spatial_connection(g, u0);
    CHECK(torsion(2, gamma).max_abs() > 0.5);
    CHECK(connection_asymmetry(2, gamma).max_abs() < 1e-12);
}

TEST_CASE("hand-built connection") {
    // Gamma_01^0 = 1, everything else zero: T_01^0 = 1, T_10^0 = -1
    Field gamma(8, 1);
    gamma(idx3(2, 0, 1, 0), 0) = 1.0;
    const Field t = torsion(2, gamma);
    CHECK(t(idx3(2, 0, 1, 0), 0) == 1.0);
    CHECK(t(idx3(2, 1, 0, 0), 0) == -1.0);
    CHECK(t(idx3(2, 0, 0, 0), 0) == 0.0);
}

TEST_CASE("direct pre-stress must be symmetric") {
    const GridSpec g = periodic_2d(8);
    Field s(4, g.nodes(), 0.0);
    s(1, 0) = 1.0;
    CHECK_THROWS_AS(direct_prestate(g, s), InputError);
    s(2, 0) = 1.0;
    CHECK_NOTHROW(direct_prestate(g, s));
}

TEST_CASE("body force model") {
    const GridSpec g = periodic_1d(32, 1.0);
    BodyForceModel f;
    CHECK_FALSE(f.active());
    f.point = PointSource{{0.5, 0.0}, {1.0, 0.0}, 2.0, 5.0, 0.2};
    const Field at_peak = f.evaluate(g, 0.2);
    CHECK(at_peak(0, 16) == doctest::Approx(2.0 / g.dx[0]));
    CHECK(at_peak.max_abs() == doctest::Approx(2.0 / g.dx[0]));
    CHECK(ricker(0.2, 5.0, 0.2) == 1.0);
    f.pattern = Field(1, g.nodes(), 1.0);
    f.signature = [](double) { return std::nan(""); };
    CHECK_THROWS_AS(f.evaluate(g, 0.0), InputError);
}
