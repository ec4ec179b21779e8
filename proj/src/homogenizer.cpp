#include "gel/homogenizer.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>
#include <string>

namespace gel {

namespace {

constexpr double kPi = std::numbers::pi;

double stiffness_of(const Phase& p) { return p.C; }
double compliance_of(const Phase& p) { return 1.0 / p.C; }
double density_of(const Phase& p) { return p.rho; }

double weighted_mean(const LaminateSpec& l, double (*value)(const Phase&)) {
    double s = 0.0;
    for (const auto& seg : l.profile) s += seg.fraction * value(l.phases[seg.phase]);
    return s;
}

// integral of a per-phase quantity over [0, x] for any real x (periodic extension)
double cumulative(const LaminateSpec& l, double (*value)(const Phase&), double x) {
    const double L = l.cell_length;
    const double periods = std::floor(x / L);
    double local = x - periods * L;
    double acc = periods * L * weighted_mean(l, value);
    for (const auto& seg : l.profile) {
        const double w = seg.fraction * L;
        const double take = std::min(w, local);
        if (take <= 0.0) break;
        acc += take * value(l.phases[seg.phase]);
        local -= take;
    }
    return acc;
}

double interval_mean(const LaminateSpec& l, double (*value)(const Phase&), double a, double b) {
    return (cumulative(l, value, b) - cumulative(l, value, a)) / (b - a);
}

Eigen::MatrixXcd toeplitz(const std::vector<cplx>& g, int N) {
    // g indexed n + 2N, n = -2N..2N
    const int size = 2 * N + 1;
    Eigen::MatrixXcd T(size, size);
    for (int m = 0; m < size; ++m)
        for (int n = 0; n < size; ++n) T(m, n) = g[static_cast<std::size_t>(m - n + 2 * N)];
    return T;
}

std::vector<GreenSymbols> all_symbols(const LaminateSpec& l, const BlochPoint& b) {
    std::vector<GreenSymbols> s;
    for (int n = -b.n_harmonics; n <= b.n_harmonics; ++n) s.push_back(green_operators(l, b, n));
    return s;
}

void require_harmonics(const BlochPoint& b) {
    if (b.n_harmonics < 8) throw HomogenizerError("truncation must keep at least 8 harmonics (N >= 8)");
}

}  // namespace

LaminateSpec LaminateSpec::layered(std::vector<Phase> phases, std::vector<double> fractions, double cell_length) {
    if (phases.size() != fractions.size()) throw HomogenizerError("one fraction per phase expected");
    LaminateSpec l;
    l.cell_length = cell_length;
    l.phases = std::move(phases);
    for (std::size_t i = 0; i < fractions.size(); ++i) l.profile.push_back({static_cast<int>(i), fractions[i]});
    return l;
}

void validate(const LaminateSpec& l) {
    if (!(l.cell_length > 0.0) || !std::isfinite(l.cell_length)) throw HomogenizerError("cell_length must be positive");
    if (l.phases.empty() || l.profile.empty()) throw HomogenizerError("laminate needs phases and a profile");
    for (std::size_t i = 0; i < l.phases.size(); ++i) {
        const auto& p = l.phases[i];
        if (!(p.C > 0.0) || !(p.rho > 0.0) || !std::isfinite(p.C) || !std::isfinite(p.rho))
            throw HomogenizerError("phase " + std::to_string(i) + ": C and rho must be positive");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < l.profile.size(); ++i) {
        const auto& s = l.profile[i];
        if (s.phase < 0 || s.phase >= static_cast<int>(l.phases.size()))
            throw HomogenizerError("segment " + std::to_string(i) + ": unknown phase " + std::to_string(s.phase));
        if (!(s.fraction > 0.0) || s.fraction > 1.0)
            throw HomogenizerError("segment " + std::to_string(i) + ": fraction must lie in (0, 1]");
        sum += s.fraction;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw HomogenizerError("segment fractions sum to " + std::to_string(sum) + ", not 1");
    if (l.C_bar && !(*l.C_bar > 0.0)) throw HomogenizerError("comparison stiffness must be positive");
    if (l.rho_bar && !(*l.rho_bar > 0.0)) throw HomogenizerError("comparison density must be positive");
}

double comparison_stiffness(const LaminateSpec& l) { return l.C_bar ? *l.C_bar : weighted_mean(l, stiffness_of); }
double comparison_density(const LaminateSpec& l) { return l.rho_bar ? *l.rho_bar : weighted_mean(l, density_of); }
double harmonic_stiffness(const LaminateSpec& l) { return 1.0 / weighted_mean(l, compliance_of); }
double mean_density(const LaminateSpec& l) { return weighted_mean(l, density_of); }

std::vector<cplx> profile_coefficients(const LaminateSpec& l, double (*value)(const Phase&), int max_n) {
    const double L = l.cell_length;
    std::vector<cplx> g(static_cast<std::size_t>(2 * max_n + 1));
    for (int n = -max_n; n <= max_n; ++n) {
        cplx acc = 0.0;
        double a = 0.0;
        for (const auto& seg : l.profile) {
            const double b = a + seg.fraction * L;
            const double v = value(l.phases[seg.phase]);
            if (n == 0) {
                acc += v * (b - a) / L;
            } else {
                const double kappa = 2.0 * kPi * n / L;
                acc += v * (std::polar(1.0, -kappa * a) - std::polar(1.0, -kappa * b)) / (cplx(0.0, kappa) * L);
            }
            a = b;
        }
        g[static_cast<std::size_t>(n + max_n)] = acc;
    }
    return g;
}

cplx green_symbol(const LaminateSpec& l, const BlochPoint& b, int n) {
    const double L = l.cell_length;
    const double Cb = comparison_stiffness(l), rb = comparison_density(l);
    const double k = b.q + 2.0 * kPi * n / L;
    const double denom = Cb * k * k - rb * b.omega * b.omega;
    if (std::abs(denom) < 1e-8 * Cb * (kPi / L) * (kPi / L))
        throw HomogenizerError("(omega, q) = (" + std::to_string(b.omega) + ", " + std::to_string(b.q) +
                               ") sits on a comparison-medium pole at harmonic n = " + std::to_string(n) +
                               "; perturb omega");
    return 1.0 / denom;
}

GreenSymbols green_operators(const LaminateSpec& l, const BlochPoint& b, int n) {
    if (n == 0) return {0.0, 0.0, 0.0, 0.0};
    const cplx G = green_symbol(l, b, n);
    const double k = b.q + 2.0 * kPi * n / l.cell_length, w = b.omega;
    return {k * k * G, w * k * G, -w * k * G, -w * w * G};
}

Perturbation perturbation_operators(const LaminateSpec& l, int N) {
    validate(l);
    const int size = 2 * N + 1;
    const Eigen::MatrixXcd compliance = toeplitz(profile_coefficients(l, compliance_of, 2 * N), N);
    Perturbation p;
    p.stiffness = compliance.partialPivLu().inverse() -
                  comparison_stiffness(l) * Eigen::MatrixXcd::Identity(size, size);
    p.density = toeplitz(profile_coefficients(l, density_of, 2 * N), N) -
                comparison_density(l) * Eigen::MatrixXcd::Identity(size, size);
    return p;
}

Polarization solve_polarizations(const Perturbation& p, const std::vector<GreenSymbols>& s, cplx ebar, cplx vbar) {
    const Eigen::Index size = p.stiffness.rows();
    if (p.stiffness.cols() != size || p.density.rows() != size || p.density.cols() != size ||
        static_cast<Eigen::Index>(s.size()) != size || size % 2 == 0)
        throw HomogenizerError("polarization operators and symbols disagree in size");
    const Eigen::Index N = size / 2;
    Eigen::VectorXcd Sx(size), Mx(size), St(size), Mt(size);
    for (Eigen::Index n = 0; n < size; ++n) {
        Sx(n) = s[n].Sx;
        Mx(n) = s[n].Mx;
        St(n) = s[n].St;
        Mt(n) = s[n].Mt;
    }
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * size, 2 * size);
    A.topLeftCorner(size, size) += p.stiffness * Sx.asDiagonal();
    A.topRightCorner(size, size) += p.stiffness * Mx.asDiagonal();
    A.bottomLeftCorner(size, size) += p.density * St.asDiagonal();
    A.bottomRightCorner(size, size) += p.density * Mt.asDiagonal();
    Eigen::VectorXcd rhs(2 * size);
    rhs.head(size) = p.stiffness.col(N) * ebar;
    rhs.tail(size) = p.density.col(N) * vbar;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    Polarization out;
    out.rcond = lu.rcond();
    if (!(out.rcond > 1e-14)) throw HomogenizerError("polarization system is singular (rcond " + std::to_string(out.rcond) + ")");
    const Eigen::VectorXcd x = lu.solve(rhs);
    out.tau = x.head(size);
    out.pi = x.tail(size);
    return out;
}

Polarization solve_polarizations(const LaminateSpec& l, const BlochPoint& b, Loading loading) {
    require_harmonics(b);
    const Perturbation p = perturbation_operators(l, b.n_harmonics);
    return loading == Loading::mean_strain ? solve_polarizations(p, all_symbols(l, b), 1.0, 0.0)
                                           : solve_polarizations(p, all_symbols(l, b), 0.0, 1.0);
}

MeanResponse mean_response(const LaminateSpec& l, const BlochPoint& b, cplx ebar, cplx vbar) {
    require_harmonics(b);
    const Polarization pol = solve_polarizations(perturbation_operators(l, b.n_harmonics), all_symbols(l, b), ebar, vbar);
    const int N = b.n_harmonics;
    return {comparison_stiffness(l) * ebar + pol.tau(N), comparison_density(l) * vbar + pol.pi(N)};
}

EffectiveOperators effective_operators(const LaminateSpec& l, const BlochPoint& b) {
    require_harmonics(b);
    const Perturbation p = perturbation_operators(l, b.n_harmonics);
    const auto s = all_symbols(l, b);
    const int N = b.n_harmonics;
    const Polarization e = solve_polarizations(p, s, 1.0, 0.0);
    const Polarization v = solve_polarizations(p, s, 0.0, 1.0);
    EffectiveOperators r;
    r.Ceff = comparison_stiffness(l) + e.tau(N);
    r.Shat = e.pi(N);
    r.Seff = v.tau(N);
    r.rhoeff = comparison_density(l) + v.pi(N);
    r.rcond = std::min(e.rcond, v.rcond);
    return r;
}

EffectiveOperators second_order_operators(const LaminateSpec& l, const BlochPoint& b) {
    validate(l);
    const int N = b.n_harmonics;
    const auto C = profile_coefficients(l, stiffness_of, N);
    const auto R = profile_coefficients(l, density_of, N);
    EffectiveOperators r;
    r.Ceff = comparison_stiffness(l) + (C[N] - comparison_stiffness(l));
    r.rhoeff = comparison_density(l) + (R[N] - comparison_density(l));
    r.Seff = r.Shat = 0.0;
    for (int n = -N; n <= N; ++n) {
        if (n == 0) continue;
        const GreenSymbols s = green_operators(l, b, n);
        const cplx c_m = C[N - n], c_p = C[N + n], r_m = R[N - n], r_p = R[N + n];
        r.Ceff -= c_m * s.Sx * c_p;
        r.rhoeff -= r_m * s.Mt * r_p;
        r.Seff -= c_m * s.Mx * r_p;
        r.Shat -= r_m * s.St * c_p;
    }
    r.rcond = 1.0;
    return r;
}

double static_limit(const LaminateSpec& l, int n_harmonics) {
    const double c1 = effective_operators(l, {0.0, 0.0, n_harmonics}).Ceff.real();
    const double c2 = effective_operators(l, {0.0, 0.0, 2 * n_harmonics}).Ceff.real();
    if (std::abs(c1 - c2) > 1e-8 * std::abs(c2))
        throw HomogenizerError("static limit not converged in truncation");
    return c2;
}

MeanResponse direct_bloch_response(const LaminateSpec& l, double omega, double q, cplx ebar, cplx vbar, int M) {
    validate(l);
    if (M < 16) throw HomogenizerError("direct solve needs at least 16 points");
    const double L = l.cell_length, h = L / M;
    std::vector<double> Cface(M), rho(M);
    for (int j = 0; j < M; ++j) {
        // series (harmonic) average over [x_j, x_j+1]; plain average of rho over the dual cell
        Cface[j] = 1.0 / interval_mean(l, compliance_of, j * h, (j + 1) * h);
        rho[j] = interval_mean(l, density_of, (j - 0.5) * h, (j + 0.5) * h);
    }
    const cplx iq(0.0, q), iw(0.0, omega);
    const cplx fwd = 1.0 / h + iq / 2.0, bwd = -1.0 / h + iq / 2.0;  // W_{j+1}, W_j weights in a face strain
    using Trip = Eigen::Triplet<cplx>;
    std::vector<Trip> trips;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(M + 1);
    for (int j = 0; j < M; ++j) {
        const int jp = (j + 1) % M, jm = (j + M - 1) % M;
        const double Cp = Cface[j], Cm = Cface[jm];
        // (d/dx + iq) sigma at node j: fwd * sigma_{j+1/2} + bwd * sigma_{j-1/2}
        trips.emplace_back(j, jp, fwd * Cp * fwd);
        trips.emplace_back(j, j, fwd * Cp * bwd + bwd * Cm * fwd + omega * omega * rho[j]);
        trips.emplace_back(j, jm, bwd * Cm * bwd);
        trips.emplace_back(j, M, -1.0);
        trips.emplace_back(M, j, 1.0);
        rhs(j) = -(fwd * Cp + bwd * Cm) * ebar - iw * rho[j] * vbar;
    }
    Eigen::SparseMatrix<cplx> A(M + 1, M + 1);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw HomogenizerError("direct Bloch system is singular");
    const Eigen::VectorXcd W = lu.solve(rhs);
    MeanResponse r{0.0, 0.0};
    for (int j = 0; j < M; ++j) {
        const int jp = (j + 1) % M;
        r.sigma += Cface[j] * (ebar + fwd * W(jp) + bwd * W(j));
        r.p += rho[j] * (vbar - iw * W(j));
    }
    r.sigma /= static_cast<double>(M);
    r.p /= static_cast<double>(M);
    return r;
}

std::vector<DispersionPoint> effective_dispersion(const LaminateSpec& l, std::span<const double> omegas, int N,
                                                  int direction) {
    validate(l);
    const double sign = direction >= 0 ? 1.0 : -1.0;
    const double c0 = std::sqrt(harmonic_stiffness(l) / mean_density(l));
    std::vector<DispersionPoint> out;
    for (double w : omegas) {
        DispersionPoint d;
        d.omega = w;
        if (w == 0.0) {
            d.q = 0.0;
            d.v_phase = c0;
            d.ops = effective_operators(l, {0.0, 0.0, N});
            out.push_back(d);
            continue;
        }
        double q = sign * w / c0;
        bool converged = false;
        for (int it = 0; it < 60 && !converged; ++it) {
            d.ops = effective_operators(l, {w, q, N});
            const cplx a = -d.ops.Ceff, b = w * (d.ops.Seff - d.ops.Shat), c = w * w * d.ops.rhoeff;
            const cplx disc = std::sqrt(b * b - 4.0 * a * c);
            const cplx r1 = (-b + disc) / (2.0 * a), r2 = (-b - disc) / (2.0 * a);
            d.q = (r1.real() * sign >= r2.real() * sign) ? r1 : r2;
            converged = std::abs(d.q.real() - q) <= 1e-12 * std::abs(q);
            q = d.q.real();
        }
        d.gap = !converged || std::abs(d.q.imag()) > 1e-6 * std::abs(d.q);
        d.v_phase = w / d.q.real();
        out.push_back(d);
    }
    return out;
}

}  // namespace gel
