#include "gel/tensor_fields.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numbers>

namespace gel {

MaterialModel MaterialModel::uniform_1d(const GridSpec& g, double stiffness, double density) {
    if (g.dim != 1) throw InputError("uniform_1d requires a 1D grid");
    return {Field(1, g.nodes(), stiffness), Field(1, g.nodes(), density)};
}

MaterialModel MaterialModel::isotropic(const GridSpec& g, double lambda, double mu, double density) {
    const int d = g.dim;
    MaterialModel m{Field(tensor_size(d, 4), g.nodes()), Field(tensor_size(d, 2), g.nodes())};
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            for (std::size_t p = 0; p < g.nodes(); ++p) m.rho(idx2(d, i, j), p) = density * delta(i, j);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const double c = lambda * delta(i, j) * delta(k, l) +
                                     mu * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
                    for (std::size_t p = 0; p < g.nodes(); ++p) m.C(idx4(d, i, j, k, l), p) = c;
                }
        }
    return m;
}

MaterialModel MaterialModel::profile_1d(const GridSpec& g, const std::function<double(double)>& stiffness,
                                        const std::function<double(double)>& density) {
    if (g.dim != 1) throw InputError("profile_1d requires a 1D grid");
    MaterialModel m{Field(1, g.nodes()), Field(1, g.nodes())};
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        const double x = g.coord(p, 0);
        m.C(0, p) = stiffness(x);
        m.rho(0, p) = density(x);
    }
    return m;
}

namespace {

// Stiffness as a quadratic form on symmetric tensors in Mandel notation.
Eigen::MatrixXd mandel(int d, const Field& C, std::size_t p) {
    if (d == 1) return Eigen::MatrixXd::Constant(1, 1, C(0, p));
    const std::array<std::array<int, 2>, 3> pairs{{{0, 0}, {1, 1}, {0, 1}}};
    const std::array<double, 3> w{1.0, 1.0, std::numbers::sqrt2};
    Eigen::MatrixXd M(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            M(a, b) = w[a] * w[b] * C(idx4(d, pairs[a][0], pairs[a][1], pairs[b][0], pairs[b][1]), p);
    return 0.5 * (M + M.transpose());
}

double min_eigen(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

MaterialReport validate_material(const GridSpec& g, const MaterialModel& m, double tol) {
    const int d = g.dim;
    MaterialReport r;
    if (m.C.components() != tensor_size(d, 4) || m.rho.components() != tensor_size(d, 2) ||
        m.C.nodes() != g.nodes() || m.rho.nodes() != g.nodes()) {
        r.pass = false;
        r.messages.push_back("material shape does not match grid");
        return r;
    }
    r.min_stiffness_eigenvalue = std::numeric_limits<double>::infinity();
    r.min_density_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        double scale = 0.0;
        for (int c = 0; c < m.C.components(); ++c) scale = std::max(scale, std::abs(m.C(c, p)));
        scale = std::max(scale, 1e-300);
        auto check = [&](int a, int b, const char* what) {
            const double defect = std::abs(m.C(a, p) - m.C(b, p)) / scale;
            if (defect > r.worst_symmetry_defect) {
                r.worst_symmetry_defect = defect;
                r.worst_symmetry_node = p;
                char buf[96];
                std::snprintf(buf, sizeof buf, "%s: component %d vs %d", what, a, b);
                r.worst_symmetry_where = buf;
            }
        };
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        const int ijkl = idx4(d, i, j, k, l);
                        check(ijkl, idx4(d, k, l, i, j), "major");
                        check(ijkl, idx4(d, j, i, k, l), "minor-left");
                        check(ijkl, idx4(d, i, j, l, k), "minor-right");
                    }
        Eigen::MatrixXd R(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                R(i, j) = m.rho(idx2(d, i, j), p);
                const double rd = std::abs(m.rho(idx2(d, i, j), p) - m.rho(idx2(d, j, i), p)) /
                                  std::max(std::abs(m.rho(idx2(d, i, j), p)), 1e-300);
                if (rd > tol && rd > r.worst_symmetry_defect) {
                    r.worst_symmetry_defect = rd;
                    r.worst_symmetry_node = p;
                    r.worst_symmetry_where = "density asymmetry";
                }
            }
        const double ec = min_eigen(mandel(d, m.C, p));
        const double er = min_eigen(0.5 * (R + R.transpose()));
        if (ec < r.min_stiffness_eigenvalue || er < r.min_density_eigenvalue) r.min_eigen_node = p;
        r.min_stiffness_eigenvalue = std::min(r.min_stiffness_eigenvalue, ec);
        r.min_density_eigenvalue = std::min(r.min_density_eigenvalue, er);
    }
    if (r.worst_symmetry_defect > tol) {
        r.pass = false;
        r.messages.push_back("symmetry defect " + std::to_string(r.worst_symmetry_defect) + " at node " +
                             std::to_string(r.worst_symmetry_node) + " (" + r.worst_symmetry_where + ")");
    }
    if (!(r.min_stiffness_eigenvalue > 0.0)) {
        r.pass = false;
        r.messages.push_back("stiffness not positive definite near node " + std::to_string(r.min_eigen_node));
    }
    if (!(r.min_density_eigenvalue > 0.0)) {
        r.pass = false;
        r.messages.push_back("density not positive definite near node " + std::to_string(r.min_eigen_node));
    }
    return r;
}

PreState PreState::zero(const GridSpec& g) {
    const int d = g.dim;
    PreState s;
    s.u0 = Field(d, g.nodes());
    s.G0 = Field(tensor_size(d, 2), g.nodes());
    s.gamma = Field(tensor_size(d, 3), g.nodes());
    s.sigma0 = Field(tensor_size(d, 2), g.nodes());
    s.v0 = Field(d, g.nodes());
    s.fbar0 = Field(d, g.nodes());
    return s;
}

PreState derive_prestate(const GridSpec& g, const MaterialModel& m, const Field& u0, const Field& v0) {
    if (u0.components() != g.dim || u0.nodes() != g.nodes()) throw InputError("u0 shape does not match grid");
    PreState s;
    s.u0 = u0;
    s.G0 = gradient(g, u0);
    s.gamma = gradient(g, s.G0);
    s.sigma0 = hooke_pre_stress(g, m.C, s.G0);
    s.v0 = v0.empty() ? Field(g.dim, g.nodes()) : v0;
    if (!s.v0.same_shape(u0)) throw InputError("v0 shape does not match grid");
    s.fbar0 = equilibrium_body_force(g, s.sigma0);
    return s;
}

PreState derive_prestate_from_gradient(const GridSpec& g, const MaterialModel& m, const Field& G0, const Field& v0) {
    if (G0.components() != g.dim * g.dim || G0.nodes() != g.nodes()) throw InputError("G0 shape does not match grid");
    PreState s;
    s.G0 = G0;
    s.gamma = gradient(g, G0);
    s.sigma0 = hooke_pre_stress(g, m.C, G0);
    s.v0 = v0.empty() ? Field(g.dim, g.nodes()) : v0;
    if (s.v0.components() != g.dim || s.v0.nodes() != g.nodes()) throw InputError("v0 shape does not match grid");
    s.fbar0 = equilibrium_body_force(g, s.sigma0);
    return s;
}

PreState direct_prestate(const GridSpec& g, const Field& sigma0, const Field& v0) {
    if (sigma0.components() != tensor_size(g.dim, 2) || sigma0.nodes() != g.nodes())
        throw InputError("sigma0 shape does not match grid");
    const int d = g.dim;
    for (std::size_t p = 0; p < g.nodes(); ++p)
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (std::abs(sigma0(idx2(d, i, j), p) - sigma0(idx2(d, j, i), p)) >
                    1e-12 * std::max(1.0, std::abs(sigma0(idx2(d, i, j), p))))
                    throw InputError("sigma0 must be symmetric");
    PreState s;
    s.sigma0 = sigma0;
    s.v0 = v0.empty() ? Field(d, g.nodes()) : v0;
    if (s.v0.components() != d || s.v0.nodes() != g.nodes()) throw InputError("v0 shape does not match grid");
    s.fbar0 = equilibrium_body_force(g, sigma0);
    return s;
}

double ricker(double t, double peak_frequency, double delay) {
    const double a = std::numbers::pi * peak_frequency * (t - delay);
    return (1.0 - 2.0 * a * a) * std::exp(-a * a);
}

Field BodyForceModel::evaluate(const GridSpec& g, double t) const {
    Field f(g.dim, g.nodes());
    if (!pattern.empty()) {
        if (pattern.components() != g.dim || pattern.nodes() != g.nodes())
            throw InputError("body force pattern shape does not match grid");
        const double s = signature ? signature(t) : 1.0;
        for (std::size_t k = 0; k < f.raw().size(); ++k) f.raw()[k] = s * pattern.raw()[k];
    }
    if (point) {
        std::array<int, 2> ij{0, 0};
        for (int a = 0; a < g.dim; ++a) {
            const int n = g.n[a];
            int i = static_cast<int>(std::lround(point->position[a] / g.dx[a]));
            ij[a] = g.bc == Boundary::periodic ? ((i % n) + n) % n : std::clamp(i, 0, n - 1);
        }
        const std::size_t node = g.index(ij[0], ij[1]);
        const double s = point->amplitude * ricker(t, point->peak_frequency, point->delay) / g.cell_volume();
        for (int a = 0; a < g.dim; ++a) f(a, node) += s * point->direction[a];
    }
    if (!f.all_finite()) throw InputError("body force is not finite at t = " + std::to_string(t));
    return f;
}

Field grad(const GridSpec& g, const Field& f, int axis) {
    if (axis < 0 || axis >= g.dim) throw InputError("axis out of range");
    if (f.nodes() != g.nodes()) throw InputError("field does not match grid");
    const int n = g.n[axis];
    if (n < 3) throw InputError("grid too small for the difference stencil");
    const double h = g.dx[axis];
    const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(g.n[0]);
    const bool periodic = g.bc == Boundary::periodic;
    Field out(f.components(), f.nodes());
    for (int c = 0; c < f.components(); ++c) {
        auto src = f.component(c);
        auto dst = out.component(c);
        for (std::size_t p = 0; p < g.nodes(); ++p) {
            const int i = g.axis_index(p, axis);
            const std::size_t base = p - static_cast<std::size_t>(i) * stride;
            auto at = [&](int k) { return src[base + static_cast<std::size_t>(k) * stride]; };
            if (i > 0 && i < n - 1) {
                dst[p] = (at(i + 1) - at(i - 1)) / (2.0 * h);
            } else if (periodic) {
                const int ip = (i + 1) % n, im = (i - 1 + n) % n;
                dst[p] = (at(ip) - at(im)) / (2.0 * h);
            } else if (i == 0) {
                dst[p] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
            } else {
                dst[p] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
            }
        }
    }
    return out;
}

Field gradient(const GridSpec& g, const Field& f) {
    const int d = g.dim;
    Field out(f.components() * d, f.nodes());
    for (int a = 0; a < d; ++a) {
        const Field da = grad(g, f, a);
        for (int c = 0; c < f.components(); ++c) {
            auto src = da.component(c);
            auto dst = out.component(c * d + a);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    }
    return out;
}

Field div(const GridSpec& g, const Field& t) {
    const int d = g.dim;
    if (t.components() != d * d) throw InputError("div expects a rank-2 field");
    Field out(d, t.nodes());
    for (int j = 0; j < d; ++j) {
        const Field dj = grad(g, t, j);
        for (int i = 0; i < d; ++i)
            for (std::size_t p = 0; p < t.nodes(); ++p) out(i, p) += dj(idx2(d, i, j), p);
    }
    return out;
}

Field strain(const GridSpec& g, const Field& u) {
    const int d = g.dim;
    const Field G = gradient(g, u);
    Field e(d * d, u.nodes());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (std::size_t p = 0; p < u.nodes(); ++p)
                e(idx2(d, i, j), p) = 0.5 * (G(idx2(d, i, j), p) + G(idx2(d, j, i), p));
    return e;
}

Field hooke_pre_stress(const GridSpec& g, const Field& C, const Field& G0) {
    const int d = g.dim;
    if (C.components() != tensor_size(d, 4) || G0.components() != d * d || C.nodes() != G0.nodes())
        throw InputError("hooke_pre_stress: shape mismatch");
    Field s(d * d, G0.nodes());
    for (std::size_t p = 0; p < G0.nodes(); ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) acc += C(idx4(d, i, j, k, l), p) * G0(idx2(d, k, l), p);
                s(idx2(d, i, j), p) = acc;
            }
    return s;
}

Field spatial_connection(const GridSpec& g, const Field& u0) {
    if (u0.components() != g.dim) throw InputError("spatial_connection expects a displacement field");
    return gradient(g, gradient(g, u0));
}

Field torsion(int d, const Field& gamma) {
    if (gamma.components() != tensor_size(d, 3)) throw InputError("torsion expects a rank-3 field");
    Field t(gamma.components(), gamma.nodes());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (std::size_t p = 0; p < gamma.nodes(); ++p)
                    t(idx3(d, i, j, k), p) = gamma(idx3(d, i, j, k), p) - gamma(idx3(d, j, i, k), p);
    return t;
}

Field connection_asymmetry(int d, const Field& gamma) {
    if (gamma.components() != tensor_size(d, 3)) throw InputError("expects a rank-3 field");
    Field t(gamma.components(), gamma.nodes());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (std::size_t p = 0; p < gamma.nodes(); ++p)
                    t(idx3(d, i, j, k), p) = gamma(idx3(d, i, j, k), p) - gamma(idx3(d, i, k, j), p);
    return t;
}

Field stress_gradient(const GridSpec& g, const Field& sigma0) { return gradient(g, sigma0); }

Field equilibrium_body_force(const GridSpec& g, const Field& sigma0) {
    Field f = div(g, sigma0);
    f *= -1.0;
    return f;
}

double equilibrium_residual(const GridSpec& g, const Field& sigma0, const Field& fbar0) {
    const Field r = div(g, sigma0) + fbar0;
    double m = 0.0;
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        bool interior = true;
        if (g.bc != Boundary::periodic)
            for (int a = 0; a < g.dim; ++a) {
                const int i = g.axis_index(p, a);
                interior = interior && i > 0 && i < g.n[a] - 1;
            }
        if (!interior) continue;
        for (int c = 0; c < r.components(); ++c) m = std::max(m, std::abs(r(c, p)));
    }
    return m;
}

Field coordinates(const GridSpec& g) {
    Field x(g.dim, g.nodes());
    for (std::size_t p = 0; p < g.nodes(); ++p)
        for (int a = 0; a < g.dim; ++a) x(a, p) = g.coord(p, a);
    return x;
}

Field sample(const GridSpec& g, int components, const std::function<double(int, double, double)>& fn) {
    Field f(components, g.nodes());
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        const double x = g.coord(p, 0);
        const double y = g.dim == 2 ? g.coord(p, 1) : 0.0;
        for (int c = 0; c < components; ++c) f(c, p) = fn(c, x, y);
    }
    return f;
}

}  // namespace gel
