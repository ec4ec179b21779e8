#include "gel/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gel {

std::string_view to_string(ModelVariant v) {
    switch (v) {
    case ModelVariant::classical: return "classical";
    case ModelVariant::willis_temporal: return "willis-temporal";
    case ModelVariant::willis_temporal_raw: return "willis-temporal-raw";
    case ModelVariant::wfe: return "wfe";
    }
    return "?";
}

ModelVariant model_from_string(std::string_view s) {
    for (auto v : {ModelVariant::classical, ModelVariant::willis_temporal, ModelVariant::willis_temporal_raw,
                   ModelVariant::wfe})
        if (to_string(v) == s) return v;
    throw InputError("unknown model variant '" + std::string(s) +
                     "' (expected classical, willis-temporal, willis-temporal-raw or wfe)");
}

LagrangianVariant lagrangian_of(ModelVariant v) {
    switch (v) {
    case ModelVariant::classical: return LagrangianVariant::l0_homogeneous;
    case ModelVariant::willis_temporal: return LagrangianVariant::l1_temporal_symmetric;
    case ModelVariant::willis_temporal_raw: return LagrangianVariant::l1_temporal_raw;
    case ModelVariant::wfe: return LagrangianVariant::l1_spatial_wfe;
    }
    return LagrangianVariant::l0_homogeneous;
}

namespace {

// Eigenvalues of a symmetric 2x2 [a b; b c].
std::pair<double, double> eig2(double a, double b, double c) {
    const double m = 0.5 * (a + c), r = std::hypot(0.5 * (a - c), b);
    return {m - r, m + r};
}

}  // namespace

double max_wave_speed(const MaterialModel& m, const GridSpec& g) {
    const int d = g.dim;
    if (m.C.components() != tensor_size(d, 4) || m.rho.components() != d * d || m.C.nodes() != g.nodes())
        throw InputError("material shape does not match the grid");
    double c2 = 0.0;
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        if (d == 1) {
            if (!(m.C(0, p) > 0.0) || !(m.rho(0, p) > 0.0))
                throw InputError("stiffness and density must be positive (node " + std::to_string(p) + ")");
            c2 = std::max(c2, m.C(0, p) / m.rho(0, p));
            continue;
        }
        const double rmin =
            eig2(m.rho(0, p), 0.5 * (m.rho(1, p) + m.rho(2, p)), m.rho(3, p)).first;
        if (!(rmin > 0.0)) throw InputError("density tensor not positive definite (node " + std::to_string(p) + ")");
        constexpr int kDirections = 180;
        for (int a = 0; a < kDirections; ++a) {
            const double th = std::numbers::pi * a / kDirections;
            const double n[2] = {std::cos(th), std::sin(th)};
            double Q[2][2] = {{0, 0}, {0, 0}};
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k)
                    for (int j = 0; j < 2; ++j)
                        for (int l = 0; l < 2; ++l) Q[i][k] += m.C(idx4(2, i, j, k, l), p) * n[j] * n[l];
            const auto [lo, hi] = eig2(Q[0][0], 0.5 * (Q[0][1] + Q[1][0]), Q[1][1]);
            if (!(lo > 0.0)) throw InputError("acoustic tensor not positive definite (node " + std::to_string(p) + ")");
            c2 = std::max(c2, hi / rmin);
        }
    }
    return std::sqrt(c2);
}

double stability_estimate(const MaterialModel& m, const GridSpec& g, double cfl) {
    if (!(cfl > 0.0 && cfl < 1.0 + 1e-15)) throw InputError("cfl must lie in (0, 1)");
    double h = g.dx[0];
    if (g.dim == 2) h = std::min(h, g.dx[1]);
    return cfl * h / (max_wave_speed(m, g) * std::sqrt(static_cast<double>(g.dim)));
}

double energy_total(const Model& m, ModelVariant v, const WaveState& s) {
    const LagrangianVariant lv = lagrangian_of(v);
    const auto params = point_params(lv, m, s.t);
    const Field G = gradient(m.grid, s.u);
    double e = 0.0;
    for (std::size_t n = 0; n < m.grid.nodes(); ++n) {
        const DensityBreakdown b = eval_density(lv, params[n], jet_at(m.grid, s, G, n));
        e += b.T + b.W;
    }
    return e * m.grid.cell_volume();
}

CouplingFields coupling_fields(const Model& m, ModelVariant variant) {
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const std::size_t N = g.nodes();
    CouplingFields out;
    if (variant == ModelVariant::willis_temporal || variant == ModelVariant::willis_temporal_raw) {
        const Field& rho = m.material.rho;
        const Field& v0 = m.prestate.v0;
        if (v0.empty()) throw InputError(std::string(to_string(variant)) + " requires v0");
        const bool sym = variant == ModelVariant::willis_temporal;
        out.stress = Field(tensor_size(d, 3), N);
        out.rate = Field(tensor_size(d, 3), N);
        for (std::size_t p = 0; p < N; ++p)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k) {
                        const double b = sym ? 0.5 * (rho(idx2(d, k, i), p) * v0(j, p) + rho(idx2(d, k, j), p) * v0(i, p))
                                             : rho(idx2(d, k, i), p) * v0(j, p);
                        const double e = sym ? 0.5 * (rho(idx2(d, i, j), p) * v0(k, p) + rho(idx2(d, i, k), p) * v0(j, p))
                                             : rho(idx2(d, i, j), p) * v0(k, p);
                        out.stress(idx3(d, i, j, k), p) = b;
                        out.rate(idx3(d, i, j, k), p) = e;
                    }
    } else if (variant == ModelVariant::wfe) {
        // couplings straight from the pre-stress: S_ijk = sigma0_ij,k and
        // K_ik = sym(sigma0_ij,jk)
        if (m.prestate.sigma0.empty()) throw InputError("wfe requires sigma0");
        out.stress = stress_gradient(g, m.prestate.sigma0);
        out.configurational = out.stress;
        const Field gd = gradient(g, div(g, m.prestate.sigma0));
        out.restoring = Field(d * d, N);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                for (std::size_t p = 0; p < N; ++p)
                    out.restoring(idx2(d, i, k), p) = 0.5 * (gd(idx2(d, i, k), p) + gd(idx2(d, k, i), p));
    }
    return out;
}

Solver::Solver(Model model, ModelVariant variant, SolverConfig config)
    : model_(std::move(model)), variant_(variant), config_(std::move(config)) {
    GridSpec& g = model_.grid;
    const int d = g.dim;
    const std::size_t N = g.nodes();
    g.validate(tensor_size(d, 4) + 8 * d);
    if (config_.record_every < 1) throw InputError("record_every must be at least 1");
    if (model_.prestate.sigma0.empty()) model_.prestate.sigma0 = Field(d * d, N);
    if (model_.prestate.fbar0.empty()) model_.prestate.fbar0 = Field(d, N);
    check_requirements(lagrangian_of(variant), model_);
    const MaterialReport rep = validate_material(g, model_.material);
    if (!rep.pass) throw InputError("invalid material: " + rep.messages.front());

    const double bound = stability_estimate(model_.material, g, 1.0);
    if (g.dt > 0.0) {
        if (g.dt > bound) throw InputError("dt exceeds the stability bound " + std::to_string(bound));
        dt_ = g.dt;
    } else {
        dt_ = stability_estimate(model_.material, g, config_.cfl);
    }

    for (int a = 0; a < d; ++a) {
        Field f(tensor_size(d, 4), N);
        const int n = g.n[a];
        for (std::size_t p = 0; p < N; ++p) {
            const int i = g.axis_index(p, a);
            if (i == n - 1 && g.bc != Boundary::periodic) continue;
            const std::size_t q = a == 0 ? p - i + (i + 1) % n : g.index(g.axis_index(p, 0), (i + 1) % n);
            for (int c = 0; c < f.components(); ++c) f(c, p) = 0.5 * (model_.material.C(c, p) + model_.material.C(c, q));
        }
        face_C_.push_back(std::move(f));
    }

    rho_inv_ = Field(d * d, N);
    for (std::size_t p = 0; p < N; ++p) {
        if (d == 1) {
            rho_inv_(0, p) = 1.0 / model_.material.rho(0, p);
        } else {
            const double a = model_.material.rho(0, p), b = model_.material.rho(1, p), c = model_.material.rho(2, p),
                         e = model_.material.rho(3, p);
            const double det = a * e - b * c;
            rho_inv_(0, p) = e / det;
            rho_inv_(1, p) = -b / det;
            rho_inv_(2, p) = -c / det;
            rho_inv_(3, p) = a / det;
        }
    }

    CouplingFields c = coupling_fields(model_, variant);
    has_rate_ = variant == ModelVariant::willis_temporal || variant == ModelVariant::willis_temporal_raw;
    stress_coupling_ = std::move(c.stress);
    rate_coupling_ = std::move(c.rate);
    configurational_ = std::move(c.configurational);
    restoring_ = std::move(c.restoring);
}

Field Solver::principal(const Field& u) const {
    const GridSpec& g = model_.grid;
    const int d = g.dim;
    const std::size_t N = g.nodes();
    const bool periodic = g.bc == Boundary::periodic;
    const bool free_ends = g.bc == Boundary::traction_free;
    Field out(d, N);

    // same-axis second derivatives in flux form with face-averaged stiffness
    for (int a = 0; a < d; ++a) {
        const int n = g.n[a];
        const double h = g.dx[a];
        const std::size_t stride = a == 0 ? 1 : static_cast<std::size_t>(g.n[0]);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                const auto Cf = face_C_[a].component(idx4(d, i, a, k, a));
                const auto uk = u.component(k);
                auto dst = out.component(i);
                for (std::size_t p = 0; p < N; ++p) {
                    const int ia = g.axis_index(p, a);
                    const bool has_right = ia < n - 1 || periodic, has_left = ia > 0 || periodic;
                    const std::size_t pr = ia < n - 1 ? p + stride : p - static_cast<std::size_t>(n - 1) * stride;
                    const std::size_t pl = ia > 0 ? p - stride : p + static_cast<std::size_t>(n - 1) * stride;
                    const double fr = has_right ? Cf[p] * (uk[pr] - uk[p]) / h : 0.0;
                    const double fl = has_left ? Cf[pl] * (uk[p] - uk[pl]) / h : 0.0;
                    if (has_left && has_right) dst[p] += (fr - fl) / h;
                    else if (free_ends) dst[p] += (fr - fl) / (0.5 * h);
                }
            }
    }
    if (d == 2) {
        // mixed terms d_j (C_ijkl u_k,l), j != l, as central of central
        const Field gu = gradient(g, u);
        Field flux(1, N);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const int l = 1 - j;
                std::fill(flux.raw().begin(), flux.raw().end(), 0.0);
                for (int k = 0; k < d; ++k) {
                    const auto C = model_.material.C.component(idx4(d, i, j, k, l));
                    const auto gk = gu.component(idx2(d, k, l));
                    for (std::size_t p = 0; p < N; ++p) flux(0, p) += C[p] * gk[p];
                }
                const Field df = grad(g, flux, j);
                auto dst = out.component(i);
                for (std::size_t p = 0; p < N; ++p) dst[p] += df(0, p);
            }
    }
    return out;
}

void Solver::apply_boundary(Field& u) const {
    const GridSpec& g = model_.grid;
    if (g.bc != Boundary::fixed_displacement) return;
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        bool edge = false;
        for (int a = 0; a < g.dim; ++a) {
            const int i = g.axis_index(p, a);
            edge = edge || i == 0 || i == g.n[a] - 1;
        }
        if (edge)
            for (int c = 0; c < u.components(); ++c) u(c, p) = 0.0;
    }
}

Field Solver::acceleration(const Field& u, const Field& udot, double t) const {
    const GridSpec& g = model_.grid;
    const int d = g.dim;
    const std::size_t N = g.nodes();
    Field F = principal(u);

    if (!stress_coupling_.empty()) {
        const Field& w = has_rate_ ? udot : u;
        Field extra(d * d, N);
        for (int ij = 0; ij < d * d; ++ij)
            for (int k = 0; k < d; ++k) {
                const auto B = stress_coupling_.component(ij * d + k);
                const auto wk = w.component(k);
                auto dst = extra.component(ij);
                for (std::size_t p = 0; p < N; ++p) dst[p] += B[p] * wk[p];
            }
        F += div(g, extra);
    }
    if (has_rate_) {
        const Field gv = gradient(g, udot);
        for (int i = 0; i < d; ++i)
            for (int js = 0; js < d * d; ++js) {
                const auto E = rate_coupling_.component(i * d * d + js);
                const auto gj = gv.component(js);
                auto dst = F.component(i);
                for (std::size_t p = 0; p < N; ++p) dst[p] += E[p] * gj[p];
            }
    }
    if (!configurational_.empty()) {
        const Field gu = gradient(g, u);
        for (int i = 0; i < d; ++i) {
            auto dst = F.component(i);
            for (int kl = 0; kl < d * d; ++kl) {
                const auto S = configurational_.component(kl * d + i);
                const auto gk = gu.component(kl);
                for (std::size_t p = 0; p < N; ++p) dst[p] -= S[p] * gk[p];
            }
            for (int k = 0; k < d; ++k) {
                const auto K = restoring_.component(idx2(d, i, k));
                const auto uk = u.component(k);
                for (std::size_t p = 0; p < N; ++p) dst[p] -= K[p] * uk[p];
            }
        }
    }
    if (model_.forces.active() || !model_.forces.f0.empty()) {
        F += model_.forces.evaluate(g, t);
        if (!model_.forces.f0.empty()) F += model_.forces.f0;
    }

    Field a(d, N);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const auto R = rho_inv_.component(idx2(d, i, j));
            const auto Fj = F.component(j);
            auto dst = a.component(i);
            for (std::size_t p = 0; p < N; ++p) dst[p] += R[p] * Fj[p];
        }
    return a;
}

LeapfrogState Solver::start(const WaveState& initial) const {
    const GridSpec& g = model_.grid;
    if (initial.u.components() != g.dim || initial.u.nodes() != g.nodes() || !initial.u.same_shape(initial.udot))
        throw InputError("initial state does not match the grid");
    if (!initial.u.all_finite() || !initial.udot.all_finite()) throw InputError("initial state is not finite");
    LeapfrogState s;
    s.u = initial.u;
    apply_boundary(s.u);
    const Field a = acceleration(s.u, initial.udot, time_of(0));
    s.u_prev = s.u - dt_ * initial.udot + (0.5 * dt_ * dt_) * a;
    apply_boundary(s.u_prev);
    return s;
}

Field Solver::advance(const LeapfrogState& s) const {
    const double t = time_of(s.step);
    Field rate;
    if (has_rate_) rate = (1.0 / dt_) * (s.u - s.u_prev);
    Field next = 2.0 * s.u - s.u_prev + (dt_ * dt_) * acceleration(s.u, rate, t);
    if (has_rate_) {
        // corrector with the centered rate, keeps the scheme second order
        rate = (0.5 / dt_) * (next - s.u_prev);
        next = 2.0 * s.u - s.u_prev + (dt_ * dt_) * acceleration(s.u, rate, t);
    }
    apply_boundary(next);
    return next;
}

void Solver::step(LeapfrogState& s) const {
    Field next = advance(s);
    s.u_prev = std::move(s.u);
    s.u = std::move(next);
    ++s.step;
}

Trajectory Solver::run(LeapfrogState s, int n_steps) const {
    if (n_steps < 0) throw InputError("n_steps must be non-negative");
    Trajectory tr;
    tr.dt = dt_;
    tr.t0 = t0_;
    double rho_inv_max = 0.0;
    for (double v : rho_inv_.raw()) rho_inv_max = std::max(rho_inv_max, std::abs(v));
    const bool forced = model_.forces.active() || !model_.forces.f0.empty();

    // growth guard reference: largest |u| up to half the elapsed steps, or what
    // the largest force seen so far could plausibly have produced
    std::vector<double> prefix_max{std::max(s.u.max_abs(), s.u_prev.max_abs())};
    double force_max = 0.0;

    for (int k = 0; k < n_steps; ++k) {
        Field next = advance(s);
        if (!next.all_finite())
            throw NumericalError("non-finite displacement at step " + std::to_string(s.step + 1));
        if (s.step % config_.record_every == 0) {
            WaveState w{s.u, (0.5 / dt_) * (next - s.u_prev), time_of(s.step)};
            if (config_.monitor_energy) tr.monitors["energy"].push_back(energy_total(model_, variant_, w));
            for (const auto& m : config_.monitors) tr.monitors[m.name].push_back(m.fn(w));
            tr.steps.push_back(s.step);
            tr.snapshots.push_back(std::move(w));
        }
        const double norm = next.max_abs();
        if (forced) force_max = std::max(force_max, model_.forces.evaluate(model_.grid, time_of(s.step)).max_abs() +
                                                        model_.forces.f0.max_abs());
        const double elapsed = time_of(s.step + 1) - t0_;
        const double ref = std::max(prefix_max[prefix_max.size() / 2], force_max * rho_inv_max * elapsed * elapsed);
        if (ref > 0.0 && norm > config_.growth_limit * ref)
            throw NumericalError("runaway growth at step " + std::to_string(s.step + 1) +
                                 " (coupling-induced instability; reduce the background velocity or pre-stress gradient)");
        prefix_max.push_back(std::max(prefix_max.back(), norm));
        s.u_prev = std::move(s.u);
        s.u = std::move(next);
        ++s.step;
    }
    tr.final_state = std::move(s);
    return tr;
}

}  // namespace gel
