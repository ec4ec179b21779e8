#include "gel/lagrangian.hpp"

#include <algorithm>
#include <cmath>

namespace gel {

std::string_view to_string(LagrangianVariant v) {
    switch (v) {
    case LagrangianVariant::l0_homogeneous: return "l0";
    case LagrangianVariant::l1_temporal_raw: return "l1-temporal-raw";
    case LagrangianVariant::l1_temporal_symmetric: return "l1-temporal-symmetric";
    case LagrangianVariant::l1_spatial_wfe: return "l1-spatial-wfe";
    }
    return "?";
}

LagrangianVariant lagrangian_from_string(std::string_view s) {
    for (auto v : kAllLagrangians)
        if (to_string(v) == s) return v;
    throw InputError("unknown lagrangian variant '" + std::string(s) +
                     "' (expected l0, l1-temporal-raw, l1-temporal-symmetric or l1-spatial-wfe)");
}

WfeCoefficients wfe_coefficients(const PointParams& p) {
    const int d = p.dim;
    WfeCoefficients w;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int s = 0; s < d; ++s) {
                double acc = 0.0;
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) acc += p.C[idx4(d, i, j, k, l)] * p.gamma[idx3(d, k, l, s)];
                w.stress_gradient[idx3(d, i, j, s)] = acc;
            }
    for (int r = 0; r < d; ++r) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) acc += p.sigma0[idx2(d, i, j)] * p.gamma[idx3(d, i, j, r)];
        w.w0_grad[r] = acc;
        for (int s = 0; s < d; ++s) {
            double h = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) h += p.gamma[idx3(d, i, j, r)] * w.stress_gradient[idx3(d, i, j, s)];
            w.w0_hess[idx2(d, r, s)] = h;
        }
    }
    return w;
}

DensityBreakdown eval_density(LagrangianVariant v, const PointParams& p, const Jet& jet) {
    const int d = p.dim;
    const auto& G = jet.grad;
    const auto& u = jet.u;
    const auto& ud = jet.udot;
    DensityBreakdown r;

    double pre = 0.0, quad = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            pre += p.sigma0[idx2(d, i, j)] * G[idx2(d, i, j)];
            double cg = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) cg += p.C[idx4(d, i, j, k, l)] * G[idx2(d, k, l)];
            quad += G[idx2(d, i, j)] * cg;
        }
    double kin = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) kin += p.rho[idx2(d, i, j)] * ud[i] * ud[j];
    r.T = 0.5 * kin;

    if (v == LagrangianVariant::l1_spatial_wfe) {
        const WfeCoefficients w = wfe_coefficients(p);
        double lin = 0.0, cross = 0.0, uu = 0.0, phi = 0.0;
        for (int s = 0; s < d; ++s) {
            lin += w.w0_grad[s] * u[s];
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) cross += w.stress_gradient[idx3(d, i, j, s)] * G[idx2(d, i, j)] * u[s];
            for (int t = 0; t < d; ++t) uu += w.w0_hess[idx2(d, s, t)] * u[s] * u[t];
        }
        r.W = pre + lin + 0.5 * (quad + 2.0 * cross + uu);
        // physical initial force f0 = fbar0 + dW0/du, expanded to first order in u
        for (int i = 0; i < d; ++i) {
            double slope = 0.0;
            for (int j = 0; j < d; ++j)
                slope += (p.fbar0_grad[idx2(d, i, j)] + w.w0_hess[idx2(d, i, j)]) * u[j];
            phi -= (p.fbar0[i] + w.w0_grad[i] + 0.5 * slope + p.f[i]) * u[i];
        }
        r.Phi = phi;
    } else {
        r.W = pre + 0.5 * quad;
        double phi = 0.0;
        for (int i = 0; i < d; ++i) phi -= (p.fbar0[i] + p.f[i]) * u[i];
        r.Phi = phi;
        if (v == LagrangianVariant::l1_temporal_raw) {
            double c = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int s = 0; s < d; ++s) c += p.rho[idx2(d, i, j)] * ud[i] * p.v0[s] * G[idx2(d, j, s)];
            r.T -= c;
        } else if (v == LagrangianVariant::l1_temporal_symmetric) {
            double c = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int s = 0; s < d; ++s) {
                        const double A = p.rho[idx2(d, i, j)] * p.v0[s] + p.rho[idx2(d, i, s)] * p.v0[j];
                        const double e = 0.5 * (G[idx2(d, j, s)] + G[idx2(d, s, j)]);
                        c += ud[i] * A * e;
                    }
            r.T -= 0.5 * c;
        }
    }
    r.L = r.W + r.Phi - r.T;
    return r;
}

CanonicalPoint canonical_point(LagrangianVariant v, const PointParams& p, const Jet& jet) {
    const int d = p.dim;
    const auto& G = jet.grad;
    const auto& u = jet.u;
    const auto& ud = jet.udot;
    CanonicalPoint c;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double cg = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) cg += p.C[idx4(d, i, j, k, l)] * G[idx2(d, k, l)];
            c.sigma_inc[idx2(d, i, j)] = cg;
        }
    for (int i = 0; i < d; ++i) {
        c.fbar[i] = p.fbar0[i] + p.f[i];
        double pr = 0.0;
        for (int j = 0; j < d; ++j) pr += p.rho[idx2(d, i, j)] * ud[j];
        c.pbar[i] = pr;
    }

    switch (v) {
    case LagrangianVariant::l0_homogeneous: break;
    case LagrangianVariant::l1_temporal_raw:
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double s = 0.0;
                for (int k = 0; k < d; ++k) s += p.rho[idx2(d, k, a)] * ud[k];
                c.sigma_inc[idx2(d, a, b)] += s * p.v0[b];
            }
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j)
                for (int r = 0; r < d; ++r) s += p.rho[idx2(d, i, j)] * G[idx2(d, j, r)] * p.v0[r];
            c.pbar[i] -= s;
        }
        break;
    case LagrangianVariant::l1_temporal_symmetric:
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double s = 0.0;
                for (int k = 0; k < d; ++k)
                    s += ud[k] * (p.rho[idx2(d, k, a)] * p.v0[b] + p.rho[idx2(d, k, b)] * p.v0[a]);
                c.sigma_inc[idx2(d, a, b)] += 0.5 * s;
            }
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j)
                for (int r = 0; r < d; ++r) {
                    const double A = p.rho[idx2(d, i, j)] * p.v0[r] + p.rho[idx2(d, i, r)] * p.v0[j];
                    s += A * 0.5 * (G[idx2(d, j, r)] + G[idx2(d, r, j)]);
                }
            c.pbar[i] -= 0.5 * s;
        }
        break;
    case LagrangianVariant::l1_spatial_wfe: {
        const WfeCoefficients w = wfe_coefficients(p);
        for (int a = 0; a < d * d; ++a)
            for (int s = 0; s < d; ++s) c.sigma_inc[a] += w.stress_gradient[a * d + s] * u[s];
        for (int r = 0; r < d; ++r) {
            double dl = w.w0_grad[r];
            for (int a = 0; a < d * d; ++a) dl += w.stress_gradient[a * d + r] * G[a];
            for (int s = 0; s < d; ++s) {
                const double f0g_rs = p.fbar0_grad[idx2(d, r, s)] + w.w0_hess[idx2(d, r, s)];
                const double f0g_sr = p.fbar0_grad[idx2(d, s, r)] + w.w0_hess[idx2(d, s, r)];
                dl += (w.w0_hess[idx2(d, r, s)] - 0.5 * (f0g_rs + f0g_sr)) * u[s];
            }
            dl -= p.fbar0[r] + w.w0_grad[r] + p.f[r];
            c.fbar[r] = -dl;
        }
        break;
    }
    }
    for (int a = 0; a < d * d; ++a) c.sbar[a] = p.sigma0[a] + c.sigma_inc[a];
    return c;
}

std::array<double, 4> fd_derivative_point(LagrangianVariant v, const PointParams& p, const Jet& j, Argument which) {
    const int d = p.dim;
    std::array<double, 4> out{};
    const int n = which == Argument::grad ? d * d : d;
    for (int k = 0; k < n; ++k) {
        Jet a = j, b = j;
        double* pa = which == Argument::u ? &a.u[k] : which == Argument::grad ? &a.grad[k] : &a.udot[k];
        double* pb = which == Argument::u ? &b.u[k] : which == Argument::grad ? &b.grad[k] : &b.udot[k];
        const double h = 1e-5 * (1.0 + std::abs(*pa));
        *pa += h;
        *pb -= h;
        out[k] = (eval_density(v, p, a).L - eval_density(v, p, b).L) / (2.0 * h);
    }
    return out;
}

void check_requirements(LagrangianVariant v, const Model& m) {
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const std::size_t N = g.nodes();
    auto need = [&](const Field& f, int comps, const char* what) {
        if (f.empty()) throw InputError(std::string(to_string(v)) + " requires " + what);
        if (f.components() != comps || f.nodes() != N)
            throw InputError(std::string(what) + " shape does not match the grid");
    };
    need(m.material.C, tensor_size(d, 4), "C");
    need(m.material.rho, tensor_size(d, 2), "rho");
    need(m.prestate.sigma0, tensor_size(d, 2), "sigma0");
    need(m.prestate.fbar0, d, "fbar0");
    if (v == LagrangianVariant::l1_temporal_raw || v == LagrangianVariant::l1_temporal_symmetric)
        need(m.prestate.v0, d, "v0");
    if (v == LagrangianVariant::l1_spatial_wfe) need(m.prestate.gamma, tensor_size(d, 3), "Gamma (a displacement u0)");
}

std::vector<PointParams> point_params(LagrangianVariant v, const Model& m, double t) {
    check_requirements(v, m);
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const std::size_t N = g.nodes();
    const PreState& ps = m.prestate;
    Field f = m.forces.evaluate(g, t);
    if (!m.forces.f0.empty()) {
        if (!m.forces.f0.same_shape(f)) throw InputError("static body force shape does not match the grid");
        f += m.forces.f0;
    }
    Field fgrad;
    if (v == LagrangianVariant::l1_spatial_wfe) fgrad = gradient(g, ps.fbar0);
    const bool have_v0 = !ps.v0.empty();

    std::vector<PointParams> out(N);
    for (std::size_t n = 0; n < N; ++n) {
        PointParams& p = out[n];
        p.dim = d;
        for (int c = 0; c < tensor_size(d, 4); ++c) p.C[c] = m.material.C(c, n);
        for (int c = 0; c < d * d; ++c) {
            p.rho[c] = m.material.rho(c, n);
            p.sigma0[c] = ps.sigma0(c, n);
        }
        for (int c = 0; c < d; ++c) {
            p.fbar0[c] = ps.fbar0(c, n);
            p.f[c] = f(c, n);
            if (have_v0) p.v0[c] = ps.v0(c, n);
        }
        if (v == LagrangianVariant::l1_spatial_wfe) {
            for (int c = 0; c < tensor_size(d, 3); ++c) p.gamma[c] = ps.gamma(c, n);
            for (int c = 0; c < d * d; ++c) p.fbar0_grad[c] = fgrad(c, n);
        }
    }
    return out;
}

Jet jet_at(const GridSpec& g, const WaveState& s, const Field& grad_u, std::size_t node) {
    const int d = g.dim;
    Jet j;
    for (int c = 0; c < d; ++c) {
        j.u[c] = s.u(c, node);
        j.udot[c] = s.udot(c, node);
    }
    for (int c = 0; c < d * d; ++c) j.grad[c] = grad_u(c, node);
    return j;
}

namespace {

void check_state(const GridSpec& g, const WaveState& s) {
    if (s.u.components() != g.dim || s.u.nodes() != g.nodes() || !s.u.same_shape(s.udot))
        throw InputError("wave state shape does not match the grid");
}

}  // namespace

DensityBreakdown eval_density(LagrangianVariant v, const Model& m, const WaveState& s, std::size_t node) {
    check_state(m.grid, s);
    if (node >= m.grid.nodes()) throw InputError("node out of range");
    const auto params = point_params(v, m, s.t);
    const Field G = gradient(m.grid, s.u);
    return eval_density(v, params[node], jet_at(m.grid, s, G, node));
}

Field density_field(LagrangianVariant v, const Model& m, const WaveState& s) {
    check_state(m.grid, s);
    const auto params = point_params(v, m, s.t);
    const Field G = gradient(m.grid, s.u);
    Field out(1, m.grid.nodes());
    for (std::size_t n = 0; n < m.grid.nodes(); ++n) out(0, n) = eval_density(v, params[n], jet_at(m.grid, s, G, n)).L;
    return out;
}

CanonicalFields canonical_fields(LagrangianVariant v, const Model& m, const WaveState& s) {
    check_state(m.grid, s);
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const auto params = point_params(v, m, s.t);
    const Field G = gradient(g, s.u);
    CanonicalFields out{Field(d, g.nodes()), Field(d * d, g.nodes()), Field(d, g.nodes()), Field(d * d, g.nodes())};
    for (std::size_t n = 0; n < g.nodes(); ++n) {
        const CanonicalPoint c = canonical_point(v, params[n], jet_at(g, s, G, n));
        for (int a = 0; a < d; ++a) {
            out.fbar(a, n) = c.fbar[a];
            out.pbar(a, n) = c.pbar[a];
        }
        for (int a = 0; a < d * d; ++a) {
            out.sbar(a, n) = c.sbar[a];
            out.sigma_inc(a, n) = c.sigma_inc[a];
        }
    }
    return out;
}

Field fd_functional_derivative(LagrangianVariant v, const Model& m, const WaveState& s, Argument which) {
    check_state(m.grid, s);
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const auto params = point_params(v, m, s.t);
    const Field G = gradient(g, s.u);
    const int comps = which == Argument::grad ? d * d : d;
    Field out(comps, g.nodes());
    for (std::size_t n = 0; n < g.nodes(); ++n) {
        const auto r = fd_derivative_point(v, params[n], jet_at(g, s, G, n), which);
        for (int c = 0; c < comps; ++c) out(c, n) = r[c];
    }
    return out;
}

double uniform_step(std::span<const WaveState> states) {
    if (states.size() < 2) throw InputError("need at least two snapshots");
    const double dt = states[1].t - states[0].t;
    if (!(dt > 0.0)) throw InputError("snapshot times must increase");
    for (std::size_t k = 1; k < states.size(); ++k) {
        const double step = states[k].t - states[k - 1].t;
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw InputError("snapshot times are not equally spaced");
    }
    return dt;
}

Field el_residual(LagrangianVariant v, const Model& m, std::span<const WaveState> window) {
    if (window.size() != 3) throw InputError("Euler-Lagrange residual needs exactly three states");
    const double dt = uniform_step(window);
    const GridSpec& g = m.grid;
    for (const auto& s : window) check_state(g, s);
    const CanonicalFields mid = canonical_fields(v, m, window[1]);
    const CanonicalFields before = canonical_fields(v, m, window[0]);
    const CanonicalFields after = canonical_fields(v, m, window[2]);
    // dL/du = -fbar, dL/du_{,j} = sbar, dL/du_{,t} = -pbar
    Field r = -1.0 * mid.fbar;
    r -= div(g, mid.sbar);
    r += (1.0 / (2.0 * dt)) * (after.pbar - before.pbar);
    return r;
}

double action(LagrangianVariant v, const Model& m, std::span<const WaveState> trajectory) {
    if (trajectory.empty()) throw InputError("empty trajectory");
    const double dt = trajectory.size() == 1 ? m.grid.dt : uniform_step(trajectory);
    double total = 0.0;
    for (const auto& s : trajectory) {
        const Field L = density_field(v, m, s);
        double acc = 0.0;
        for (double x : L.raw()) acc += x;
        total += acc;
    }
    return total * m.grid.cell_volume() * dt;
}

}  // namespace gel
