#include "gel/gauge.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace gel {

std::string_view to_string(TransformKind k) {
    switch (k) {
    case TransformKind::temporal: return "temporal";
    case TransformKind::spatial: return "spatial";
    case TransformKind::translation: return "translation";
    case TransformKind::custom: return "custom (unverified physical meaning)";
    }
    return "?";
}

Field cov_dt(const GridSpec& g, const WaveState& s, const Field& v0) {
    const int d = g.dim;
    if (s.u.components() != d || s.u.nodes() != g.nodes() || !s.udot.same_shape(s.u) || !v0.same_shape(s.u))
        throw InputError("cov_dt: shape mismatch");
    const Field G = gradient(g, s.u);
    Field out = s.udot;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (std::size_t p = 0; p < g.nodes(); ++p) out(i, p) -= G(idx2(d, i, j), p) * v0(j, p);
    return out;
}

Field cov_dx(const GridSpec& g, const Field& u, const Field& gamma) {
    const int d = g.dim;
    if (u.components() != d || u.nodes() != g.nodes() || gamma.components() != tensor_size(d, 3) ||
        gamma.nodes() != g.nodes())
        throw InputError("cov_dx: shape mismatch");
    Field out = gradient(g, u);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (std::size_t p = 0; p < g.nodes(); ++p) out(idx2(d, i, j), p) += gamma(idx3(d, i, j, k), p) * u(k, p);
    return out;
}

LocalTransform build_transform(TransformKind kind, const Field& amplitude, const GridSpec& g, const WaveState& s,
                               const PreState& pre, double eps) {
    const int d = g.dim;
    const std::size_t N = g.nodes();
    if (amplitude.nodes() != N) throw InputError("transform amplitude does not match the grid");
    LocalTransform tr;
    tr.kind = kind;
    tr.eps = eps;
    tr.dx = Field(d + 1, N);
    tr.du = Field(d, N);
    switch (kind) {
    case TransformKind::temporal: {
        if (amplitude.components() != 1) throw InputError("temporal transform takes a scalar time shift");
        const Field v0 = pre.v0.empty() ? Field(d, N) : pre.v0;
        const Field ct = cov_dt(g, s, v0);
        for (std::size_t p = 0; p < N; ++p) {
            const double shift = eps * amplitude(0, p);
            tr.dx(d, p) = shift;
            for (int i = 0; i < d; ++i) tr.du(i, p) = ct(i, p) * shift;
        }
        break;
    }
    case TransformKind::spatial: {
        if (amplitude.components() != d) throw InputError("spatial transform takes a d-component shift");
        if (!pre.has_gamma()) throw InputError("spatial transform requires the connection (a pre-displacement)");
        const Field cx = cov_dx(g, s.u, pre.gamma);
        for (std::size_t p = 0; p < N; ++p)
            for (int j = 0; j < d; ++j) {
                const double shift = eps * amplitude(j, p);
                tr.dx(j, p) = shift;
                for (int i = 0; i < d; ++i) tr.du(i, p) += cx(idx2(d, i, j), p) * shift;
            }
        break;
    }
    case TransformKind::translation:
        if (amplitude.components() == 1) {
            for (std::size_t p = 0; p < N; ++p) tr.dx(d, p) = eps * amplitude(0, p);
        } else if (amplitude.components() == d) {
            for (std::size_t p = 0; p < N; ++p)
                for (int j = 0; j < d; ++j) tr.dx(j, p) = eps * amplitude(j, p);
        } else {
            throw InputError("translation takes a scalar time shift or a d-component space shift");
        }
        break;
    case TransformKind::custom: throw InputError("custom transforms are supplied directly, not built");
    }
    return tr;
}

Field noether_current(LagrangianVariant v, const Model& m, const WaveState& s, const LocalTransform& tr) {
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const std::size_t N = g.nodes();
    if (tr.dx.components() != d + 1 || tr.dx.nodes() != N || tr.du.components() != d || tr.du.nodes() != N)
        throw InputError("transform does not match the grid");
    const CanonicalFields c = canonical_fields(v, m, s);
    const Field L = density_field(v, m, s);
    const Field G = gradient(g, s.u);
    Field P(d + 1, N);
    for (std::size_t p = 0; p < N; ++p) {
        // u_{i,b} dx_b over space and time
        std::array<double, 2> shift{};
        for (int i = 0; i < d; ++i) {
            double acc = s.udot(i, p) * tr.dx(d, p);
            for (int b = 0; b < d; ++b) acc += G(idx2(d, i, b), p) * tr.dx(b, p);
            shift[i] = acc;
        }
        for (int a = 0; a < d; ++a) {
            double acc = L(0, p) * tr.dx(a, p);
            for (int i = 0; i < d; ++i) acc += c.sbar(idx2(d, i, a), p) * (tr.du(i, p) - shift[i]);
            P(a, p) = acc;
        }
        double acc = L(0, p) * tr.dx(d, p);
        for (int i = 0; i < d; ++i) acc -= c.pbar(i, p) * (tr.du(i, p) - shift[i]);
        P(d, p) = acc;
    }
    return P;
}

DivergenceResult noether_divergence(const GridSpec& g, std::span<const Field> currents, double dt) {
    const int d = g.dim;
    if (currents.size() < 3) throw InputError("divergence needs at least three time levels");
    if (!(dt > 0.0)) throw InputError("dt must be positive");
    for (const auto& P : currents)
        if (P.components() != d + 1 || P.nodes() != g.nodes()) throw InputError("current does not match the grid");
    DivergenceResult r;
    double sq = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 1; k + 1 < currents.size(); ++k) {
        Field div_p(1, g.nodes());
        for (std::size_t p = 0; p < g.nodes(); ++p)
            div_p(0, p) = (currents[k + 1](d, p) - currents[k - 1](d, p)) / (2.0 * dt);
        for (int a = 0; a < d; ++a) {
            Field comp(1, g.nodes());
            const auto src = currents[k].component(a);
            std::copy(src.begin(), src.end(), comp.component(0).begin());
            div_p += grad(g, comp, a);
        }
        for (double x : div_p.raw()) {
            sq += x * x;
            r.max = std::max(r.max, std::abs(x));
        }
        count += g.nodes();
        r.residual.push_back(std::move(div_p));
    }
    r.rms = std::sqrt(sq / static_cast<double>(count));
    return r;
}

std::vector<Field> add_spacetime_curl(const GridSpec& g, std::span<const Field> currents, std::span<const Field> q,
                                      double dt) {
    const int d = g.dim;
    const int qc = d == 1 ? 1 : 3;
    if (currents.size() != q.size() || currents.size() < 3) throw InputError("curl needs matching levels (>= 3)");
    auto single = [&](const Field& f, int c) {
        Field out(1, g.nodes());
        const auto src = f.component(c);
        std::copy(src.begin(), src.end(), out.component(0).begin());
        return out;
    };
    std::vector<Field> out;
    for (std::size_t k = 1; k + 1 < q.size(); ++k) {
        if (q[k].components() != qc || q[k].nodes() != g.nodes()) throw InputError("potential has the wrong shape");
        auto dt_of = [&](int c) {
            Field f(1, g.nodes());
            for (std::size_t p = 0; p < g.nodes(); ++p) f(0, p) = (q[k + 1](c, p) - q[k - 1](c, p)) / (2.0 * dt);
            return f;
        };
        Field P = currents[k];
        if (d == 1) {
            // psi -> (psi_t, -psi_x)
            const Field psi_t = dt_of(0), psi_x = grad(g, single(q[k], 0), 0);
            for (std::size_t p = 0; p < g.nodes(); ++p) {
                P(0, p) += psi_t(0, p);
                P(1, p) -= psi_x(0, p);
            }
        } else {
            const Field qx = single(q[k], 0), qy = single(q[k], 1), qt = single(q[k], 2);
            const Field qt_y = grad(g, qt, 1), qt_x = grad(g, qt, 0);
            const Field qy_x = grad(g, qy, 0), qx_y = grad(g, qx, 1);
            const Field qy_t = dt_of(1), qx_t = dt_of(0);
            for (std::size_t p = 0; p < g.nodes(); ++p) {
                P(0, p) += qt_y(0, p) - qy_t(0, p);
                P(1, p) += qx_t(0, p) - qt_x(0, p);
                P(2, p) += qy_x(0, p) - qx_y(0, p);
            }
        }
        out.push_back(std::move(P));
    }
    return out;
}

namespace {

struct BoxWeights {
    std::vector<std::size_t> nodes;
    // face contributions: node, axis, sign (+1 outer high face, -1 low face), partner node
    struct Face {
        std::size_t inner, outer;
        int axis;
        double sign;
    };
    std::vector<Face> faces;
};

BoxWeights box_weights(const GridSpec& g, const std::optional<IndexBox>& box) {
    BoxWeights w;
    const int d = g.dim;
    if (!box) {
        if (g.bc != Boundary::periodic) throw InputError("whole-domain balances require periodic boundaries");
        for (std::size_t p = 0; p < g.nodes(); ++p) w.nodes.push_back(p);
        return w;
    }
    for (int a = 0; a < d; ++a) {
        const bool ok = g.bc == Boundary::periodic ? box->lo[a] >= 0 && box->hi[a] < g.n[a] && box->lo[a] <= box->hi[a]
                                                   : box->lo[a] >= 1 && box->hi[a] <= g.n[a] - 2 && box->lo[a] <= box->hi[a];
        if (!ok) throw InputError("balance box out of range (non-periodic boxes must leave one node of margin)");
    }
    const int ylo = d == 2 ? box->lo[1] : 0, yhi = d == 2 ? box->hi[1] : 0;
    for (int j = ylo; j <= yhi; ++j)
        for (int i = box->lo[0]; i <= box->hi[0]; ++i) w.nodes.push_back(g.index(i, j));
    auto wrap = [&](int i, int a) { return ((i % g.n[a]) + g.n[a]) % g.n[a]; };
    for (int j = ylo; j <= yhi; ++j) {
        w.faces.push_back({g.index(box->hi[0], j), g.index(wrap(box->hi[0] + 1, 0), j), 0, +1.0});
        w.faces.push_back({g.index(box->lo[0], j), g.index(wrap(box->lo[0] - 1, 0), j), 0, -1.0});
    }
    if (d == 2)
        for (int i = box->lo[0]; i <= box->hi[0]; ++i) {
            w.faces.push_back({g.index(i, box->hi[1]), g.index(i, wrap(box->hi[1] + 1, 1)), 1, +1.0});
            w.faces.push_back({g.index(i, box->lo[1]), g.index(i, wrap(box->lo[1] - 1, 1)), 1, -1.0});
        }
    return w;
}

// density (1 comp) and flux (d comps) of a balance law at one snapshot
struct BalanceFields {
    Field density;
    Field flux;
};

BalanceSeries assemble(const GridSpec& g, std::span<const WaveState> tr, const std::optional<IndexBox>& box,
                       const std::function<BalanceFields(const WaveState&)>& fields) {
    if (tr.size() < 3) throw InputError("a balance needs at least three snapshots");
    const double dt = uniform_step(tr);
    const BoxWeights w = box_weights(g, box);
    const double vol = g.cell_volume();
    std::vector<double> integral, flux;
    for (const auto& s : tr) {
        const BalanceFields f = fields(s);
        double q = 0.0;
        for (std::size_t p : w.nodes) q += f.density(0, p);
        integral.push_back(q * vol);
        double fl = 0.0;
        for (const auto& face : w.faces) {
            const double area = g.dim == 2 ? g.dx[1 - face.axis] : 1.0;
            fl += face.sign * 0.5 * (f.flux(face.axis, face.inner) + f.flux(face.axis, face.outer)) * area;
        }
        flux.push_back(fl);
    }
    BalanceSeries r;
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
        r.t.push_back(tr[k].t);
        r.lhs.push_back((integral[k + 1] - integral[k - 1]) / (2.0 * dt));
        r.rhs.push_back(flux[k]);
        const double defect = r.lhs.back() - r.rhs.back();
        sum += defect;
        r.max_defect = std::max(r.max_defect, std::abs(defect));
        r.scale = std::max({r.scale, std::abs(r.lhs.back()), std::abs(r.rhs.back())});
    }
    r.mean_defect = std::abs(sum) / static_cast<double>(r.t.size());
    return r;
}

double middle_el_rms(LagrangianVariant v, const Model& m, std::span<const WaveState> tr) {
    const std::size_t mid = tr.size() / 2;
    return el_residual(v, m, tr.subspan(mid - 1, 3)).rms();
}

}  // namespace

BalanceSeries conservation_temporal(const Model& m, std::span<const WaveState> trajectory, std::optional<IndexBox> box,
                                    double sign) {
    const LagrangianVariant v = LagrangianVariant::l1_temporal_symmetric;
    check_requirements(v, m);
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const Field& v0 = m.prestate.v0;
    BalanceSeries r = assemble(g, trajectory, box, [&](const WaveState& s) {
        const CanonicalFields c = canonical_fields(v, m, s);
        const Field L = density_field(v, m, s);
        const Field G = gradient(g, s.u);
        BalanceFields f{Field(1, g.nodes()), Field(d, g.nodes())};
        for (std::size_t p = 0; p < g.nodes(); ++p) {
            std::array<double, 2> uv{};  // u_{i,j} v0_j
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) uv[i] += G(idx2(d, i, j), p) * v0(j, p);
            double q = L(0, p);
            for (int i = 0; i < d; ++i) q += sign * c.pbar(i, p) * uv[i];
            f.density(0, p) = q;
            for (int k = 0; k < d; ++k) {
                double fl = 0.0;
                for (int i = 0; i < d; ++i) fl += c.sbar(idx2(d, i, k), p) * uv[i];
                f.flux(k, p) = fl;
            }
        }
        return f;
    });
    r.el_rms = middle_el_rms(v, m, trajectory);
    return r;
}

BalanceSeries conservation_spatial(const Model& m, std::span<const WaveState> trajectory, std::optional<IndexBox> box,
                                   int axis) {
    const LagrangianVariant v = LagrangianVariant::l1_spatial_wfe;
    check_requirements(v, m);
    const GridSpec& g = m.grid;
    const int d = g.dim;
    if (axis < 0 || axis >= d) throw InputError("axis out of range");
    const Field& gamma = m.prestate.gamma;
    BalanceSeries r = assemble(g, trajectory, box, [&](const WaveState& s) {
        const CanonicalFields c = canonical_fields(v, m, s);
        const Field L = density_field(v, m, s);
        BalanceFields f{Field(1, g.nodes()), Field(d, g.nodes())};
        for (std::size_t p = 0; p < g.nodes(); ++p) {
            std::array<double, 2> gu{};  // Gamma_i,axis^r u_r
            for (int i = 0; i < d; ++i)
                for (int r2 = 0; r2 < d; ++r2) gu[i] += gamma(idx3(d, i, axis, r2), p) * s.u(r2, p);
            double q = 0.0;
            for (int i = 0; i < d; ++i) q += c.pbar(i, p) * gu[i];
            f.density(0, p) = q;
            for (int k = 0; k < d; ++k) {
                double fl = k == axis ? L(0, p) : 0.0;
                for (int i = 0; i < d; ++i) fl += c.sbar(idx2(d, i, k), p) * gu[i];
                f.flux(k, p) = fl;
            }
        }
        return f;
    });
    r.el_rms = middle_el_rms(v, m, trajectory);
    return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw InputError("slope fit needs positive values");
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

using Var = Expression::Var;
constexpr std::array<Var, 3> kVars{Var::x, Var::y, Var::t};

// Every coefficient of an analytic medium as an expression, plus the transform.
class Harness {
public:
    Harness(const AnalyticMedium& m, const TransformProfile& tp) : d_(m.dim), prof_(tp) {
        if (d_ != 1 && d_ != 2) throw InputError("analytic medium dim must be 1 or 2");
        const Expression zero = Expression::constant(0.0), one = Expression::constant(1.0);
        const int d = d_;
        C_.assign(tensor_size(d, 4), zero);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        if (d == 1) {
                            C_[0] = m.stiffness;
                            continue;
                        }
                        Expression c = zero;
                        if (i == j && k == l) c = c + m.stiffness;
                        if (i == k && j == l) c = c + m.shear;
                        if (i == l && j == k) c = c + m.shear;
                        C_[idx4(d, i, j, k, l)] = c;
                    }
        rho_ = m.density;
        for (int i = 0; i < d; ++i) {
            v0_[i] = m.u0[i].derivative(Var::t);
            for (int j = 0; j < d; ++j) {
                G0_[idx2(d, i, j)] = m.u0[i].derivative(kVars[j]);
                for (int k = 0; k < d; ++k) gamma_[idx3(d, i, j, k)] = G0_[idx2(d, i, j)].derivative(kVars[k]);
            }
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Expression s = zero;
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) s = s + C_[idx4(d, i, j, k, l)] * G0_[idx2(d, k, l)];
                sigma0_[idx2(d, i, j)] = s;
            }
        for (int i = 0; i < d; ++i) {
            Expression f = zero;
            for (int j = 0; j < d; ++j) f = f - sigma0_[idx2(d, i, j)].derivative(kVars[j]);
            fbar0_[i] = f;
            for (int k = 0; k < d; ++k) fbar0_grad_[idx2(d, i, k)] = f.derivative(kVars[k]);
        }
        // trial field and its first derivatives over (space..., t)
        for (int i = 0; i < d; ++i) {
            u_[i] = m.u[i];
            for (int a = 0; a <= d; ++a) du_dX_[i][a] = m.u[i].derivative(axis_var(a));
        }
        // Gaussian profile over the active axes
        Expression arg = zero;
        for (int a = 0; a <= d; ++a) {
            const int slot = a == d ? 2 : a;
            const Expression z = (Expression::variable(axis_var(a)) - Expression::constant(tp.center[slot])) /
                                 Expression::constant(tp.width[slot]);
            arg = arg - z * z;
        }
        const Expression bump = exp(arg);
        for (int a = 0; a <= d; ++a) dX_[a] = zero;
        std::array<Expression, 2> du{zero, zero};
        if (tp.kind == TransformKind::temporal) {
            dX_[d] = bump;
            for (int i = 0; i < d; ++i) {
                Expression c = du_dX_[i][d];
                for (int j = 0; j < d; ++j) c = c - du_dX_[i][j] * v0_[j];
                du[i] = c * bump;
            }
        } else if (tp.kind == TransformKind::spatial || tp.kind == TransformKind::translation) {
            for (int j = 0; j < d; ++j) dX_[j] = bump * Expression::constant(tp.direction[j]);
            if (tp.kind == TransformKind::spatial)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        Expression c = du_dX_[i][j];
                        for (int k = 0; k < d; ++k) c = c + gamma_[idx3(d, i, j, k)] * u_[k];
                        du[i] = du[i] + c * dX_[j];
                    }
        } else {
            throw InputError("the invariance harness builds temporal, spatial or translation transforms only");
        }
        for (int i = 0; i < d; ++i) {
            du_[i] = du[i];
            for (int a = 0; a <= d; ++a) ddu_[i][a] = du[i].derivative(axis_var(a));
        }
        for (int a = 0; a <= d; ++a)
            for (int b = 0; b <= d; ++b) ddX_[a][b] = dX_[a].derivative(axis_var(b));
    }

    double defect(LagrangianVariant v, LagrangianVariant forcing, double eps) {
        if (base_.empty() || base_variant_ != v || base_forcing_ != forcing) {
            base_.clear();
            base_variant_ = v;
            base_forcing_ = forcing;
            for_each_point([&](const std::array<double, 3>& X) {
                base_.push_back(eval_density(v, params(X, forcing), jet(X)).L);
            });
        }
        if (eps == 0.0) return 0.0;
        const int d = d_;
        double sum = 0.0;
        std::size_t k = 0;
        for_each_point([&](const std::array<double, 3>& X) {
            // x' = x + eps dX; M = dx'/dx over (space..., t)
            Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
            std::array<double, 3> Xp = X;
            for (int a = 0; a <= d; ++a) {
                Xp[slot(a)] += eps * dX_[a](X[0], X[1], X[2]);
                for (int b = 0; b <= d; ++b) M(a, b) += eps * ddX_[a][b](X[0], X[1], X[2]);
            }
            const Eigen::MatrixXd Md = M.topLeftCorner(d + 1, d + 1);
            const double J = Md.determinant();
            if (!(J > 0.0)) throw InputError("transform Jacobian is not positive; reduce eps");
            const Eigen::MatrixXd Minv = Md.inverse();
            Jet jp;
            for (int i = 0; i < d; ++i) {
                jp.u[i] = u_[i](X[0], X[1], X[2]) + eps * du_[i](X[0], X[1], X[2]);
                std::array<double, 3> D{};
                for (int b = 0; b <= d; ++b)
                    D[b] = du_dX_[i][b](X[0], X[1], X[2]) + eps * ddu_[i][b](X[0], X[1], X[2]);
                for (int a = 0; a <= d; ++a) {
                    double acc = 0.0;
                    for (int b = 0; b <= d; ++b) acc += D[b] * Minv(b, a);
                    if (a < d) jp.grad[idx2(d, i, a)] = acc;
                    else jp.udot[i] = acc;
                }
            }
            const double Lp = eval_density(v, params(Xp, forcing), jp).L;
            sum += Lp * J - base_[k++];
        });
        double cell = 1.0;
        for (int a = 0; a <= d; ++a) cell *= step(a);
        return std::abs(sum * cell);
    }

private:
    int d_;
    TransformProfile prof_;
    std::vector<Expression> C_;
    Expression rho_;
    std::array<Expression, 2> v0_, fbar0_, u_, du_;
    std::array<Expression, 4> G0_, sigma0_, fbar0_grad_;
    std::array<Expression, 8> gamma_;
    std::array<std::array<Expression, 3>, 2> du_dX_, ddu_;
    std::array<Expression, 3> dX_;
    std::array<std::array<Expression, 3>, 3> ddX_;
    std::vector<double> base_;
    LagrangianVariant base_variant_{}, base_forcing_{};

    Var axis_var(int a) const { return a == d_ ? Var::t : kVars[a]; }
    int slot(int a) const { return a == d_ ? 2 : a; }
    double step(int a) const { return 2.0 * prof_.half_extent * prof_.width[slot(a)] / prof_.points[slot(a)]; }

    template <class F>
    void for_each_point(F&& fn) const {
        const int d = d_;
        const int nx = prof_.points[0], ny = d == 2 ? prof_.points[1] : 1, nt = prof_.points[2];
        std::array<double, 3> X{0.0, 0.0, 0.0};
        auto coord = [&](int a, int i) {
            const int s = slot(a);
            return prof_.center[s] - prof_.half_extent * prof_.width[s] + (i + 0.5) * step(a);
        };
        for (int it = 0; it < nt; ++it)
            for (int iy = 0; iy < ny; ++iy)
                for (int ix = 0; ix < nx; ++ix) {
                    X[0] = coord(0, ix);
                    if (d == 2) X[1] = coord(1, iy);
                    X[2] = coord(d, it);
                    fn(X);
                }
    }

    Jet jet(const std::array<double, 3>& X) const {
        Jet j;
        for (int i = 0; i < d_; ++i) {
            j.u[i] = u_[i](X[0], X[1], X[2]);
            for (int a = 0; a < d_; ++a) j.grad[idx2(d_, i, a)] = du_dX_[i][a](X[0], X[1], X[2]);
            j.udot[i] = du_dX_[i][d_](X[0], X[1], X[2]);
        }
        return j;
    }

    PointParams medium(const std::array<double, 3>& X) const {
        const int d = d_;
        PointParams p;
        p.dim = d;
        const double x = X[0], y = X[1], t = X[2];
        for (int c = 0; c < tensor_size(d, 4); ++c) p.C[c] = C_[c](x, y, t);
        const double r = rho_(x, y, t);
        for (int i = 0; i < d; ++i) {
            p.rho[idx2(d, i, i)] = r;
            p.v0[i] = v0_[i](x, y, t);
            p.fbar0[i] = fbar0_[i](x, y, t);
        }
        for (int c = 0; c < d * d; ++c) {
            p.sigma0[c] = sigma0_[c](x, y, t);
            p.fbar0_grad[c] = fbar0_grad_[c](x, y, t);
        }
        for (int c = 0; c < tensor_size(d, 3); ++c) p.gamma[c] = gamma_[c](x, y, t);
        return p;
    }

    // Body force that makes the trial field an exact solution of `forcing`:
    // the Euler-Lagrange residual without force, by differences of the canonical
    // fields.
    PointParams params(const std::array<double, 3>& X, LagrangianVariant forcing) const {
        const int d = d_;
        PointParams p = medium(X);
        const CanonicalPoint c0 = canonical_point(forcing, p, jet(X));
        std::array<double, 2> r{};
        for (int i = 0; i < d; ++i) r[i] = -c0.fbar[i];
        // wide eighth-order stencil: rounding noise here does not cancel between
        // x and x', truncation is smooth and only moves the field off-shell by ~1e-14
        constexpr double h = 4e-2;
        constexpr std::array<double, 4> w{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
        for (int a = 0; a <= d; ++a) {
            std::array<CanonicalPoint, 8> cs;  // +h, -h, +2h, -2h, ...
            for (int s = 0; s < 8; ++s) {
                std::array<double, 3> Y = X;
                Y[slot(a)] += (s % 2 ? -1.0 : 1.0) * (s / 2 + 1) * h;
                cs[s] = canonical_point(forcing, medium(Y), jet(Y));
            }
            auto d8 = [&](auto get) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += w[k] * (get(cs[2 * k]) - get(cs[2 * k + 1]));
                return acc / h;
            };
            for (int i = 0; i < d; ++i) {
                if (a < d) r[i] -= d8([&](const CanonicalPoint& c) { return c.sbar[idx2(d, i, a)]; });
                else r[i] += d8([&](const CanonicalPoint& c) { return c.pbar[i]; });
            }
        }
        for (int i = 0; i < d; ++i) p.f[i] = r[i];
        return p;
    }
};

}  // namespace

double action_defect(LagrangianVariant v, const AnalyticMedium& medium, LagrangianVariant forcing,
                     const TransformProfile& profile, double eps) {
    Harness h(medium, profile);
    return h.defect(v, forcing, eps);
}

SlopeFit defect_slope(LagrangianVariant v, const AnalyticMedium& medium, LagrangianVariant forcing,
                      const TransformProfile& profile, std::span<const double> eps_values) {
    Harness h(medium, profile);
    SlopeFit fit;
    for (double e : eps_values) {
        fit.eps.push_back(e);
        fit.defect.push_back(h.defect(v, forcing, e));
    }
    fit.slope = loglog_slope(fit.eps, fit.defect);
    return fit;
}

}  // namespace gel
