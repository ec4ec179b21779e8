#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace gel {

using cplx = std::complex<double>;

class HomogenizerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Phase {
    double C = 1.0;
    double rho = 1.0;
};

/// One piece of the cell profile: phase index and width as a fraction of the cell.
struct Segment {
    int phase = 0;
    double fraction = 0.0;
};

/// 1D periodic cell made of piecewise-constant segments laid out from x = 0.
/// A mirror-asymmetric cell needs at least three segments.
struct LaminateSpec {
    double cell_length = 1.0;
    std::vector<Phase> phases;
    std::vector<Segment> profile;
    std::optional<double> C_bar;    ///< comparison stiffness; default arithmetic mean
    std::optional<double> rho_bar;  ///< comparison density; default arithmetic mean

    /// One segment per phase in order, with the given fractions.
    static LaminateSpec layered(std::vector<Phase> phases, std::vector<double> fractions, double cell_length = 1.0);
};

/// Throws InputError-like HomogenizerError on non-positive moduli, fractions
/// outside (0, 1] or not summing to one, and bad phase indices.
void validate(const LaminateSpec& l);
double comparison_stiffness(const LaminateSpec& l);
double comparison_density(const LaminateSpec& l);
double harmonic_stiffness(const LaminateSpec& l);
double mean_density(const LaminateSpec& l);

/// Fourier coefficients g_n = (1/L) int g(x) e^{-i 2 pi n x / L} dx of a
/// per-phase quantity, n = -max_n..max_n at index n + max_n. Closed form.
std::vector<cplx> profile_coefficients(const LaminateSpec& l, double (*value)(const Phase&), int max_n);

struct BlochPoint {
    double omega = 0.0;
    double q = 0.0;
    int n_harmonics = 32;  ///< modes -N..N
};

/// 1 / (Cbar k_n^2 - rhobar omega^2), k_n = q + 2 pi n / L. Throws
/// HomogenizerError within 1e-8 Cbar (pi/L)^2 of a comparison-medium pole.
cplx green_symbol(const LaminateSpec& l, const BlochPoint& b, int n);

/// Symbols of the strain and velocity responses of the comparison medium to
/// stress and momentum polarizations (fields ~ exp(i(kx - wt))):
///   e = ebar - Sx tau - Mx pi,  v = vbar - St tau - Mt pi
/// Sx = k^2 G, Mx = w k G, St = -w k G, Mt = -w^2 G; zero for n = 0 so that
/// the cell means are exactly the loadings.
struct GreenSymbols {
    cplx Sx, Mx, St, Mt;
};
GreenSymbols green_operators(const LaminateSpec& l, const BlochPoint& b, int n);

/// Convolution operators of the perturbations on modes -N..N:
/// stress (inverse rule) [[1/C]]^{-1} - Cbar, momentum (Laurent) [[rho]] - rhobar.
struct Perturbation {
    Eigen::MatrixXcd stiffness;
    Eigen::MatrixXcd density;
};
Perturbation perturbation_operators(const LaminateSpec& l, int n_harmonics);

struct Polarization {
    Eigen::VectorXcd tau;  ///< modes -N..N
    Eigen::VectorXcd pi;
    double rcond = 0.0;    ///< reciprocal condition estimate of the system
};

/// tau + DC (Sx tau + Mx pi) = DC ebar e_0, pi + Drho (St tau + Mt pi) = Drho vbar e_0.
Polarization solve_polarizations(const Perturbation& p, const std::vector<GreenSymbols>& symbols, cplx ebar,
                                 cplx vbar);

enum class Loading { mean_strain, mean_velocity };

/// Unit loading; requires n_harmonics >= 8.
Polarization solve_polarizations(const LaminateSpec& l, const BlochPoint& b, Loading loading);

struct MeanResponse {
    cplx sigma;  ///< <sigma>
    cplx p;      ///< <p>
};

/// <sigma> = Cbar ebar + tau_0, <p> = rhobar vbar + pi_0.
MeanResponse mean_response(const LaminateSpec& l, const BlochPoint& b, cplx ebar, cplx vbar);

/// <sigma> = Ceff <e> + Seff <v>,  <p> = Shat <e> + rhoeff <v>.
struct EffectiveOperators {
    cplx Ceff, rhoeff, Seff, Shat;
    double rcond = 0.0;
};

EffectiveOperators effective_operators(const LaminateSpec& l, const BlochPoint& b);

/// Second-order perturbation formulas with mean-free Laurent coefficients:
/// Ceff = Cbar + <dC> - <dC' Sx dC'>, rhoeff = rhobar + <drho> - <drho' Mt drho'>,
/// Seff = -<dC' Mx drho'>, Shat = -<drho' St dC'>.
EffectiveOperators second_order_operators(const LaminateSpec& l, const BlochPoint& b);

/// Ceff at omega = q = 0 from the full solve; throws HomogenizerError when it
/// moves by more than 1e-8 relative as the truncation doubles.
double static_limit(const LaminateSpec& l, int n_harmonics = 32);

/// Independent check: the heterogeneous time-harmonic problem for the periodic
/// part W of u = e^{iqx}(ubar + W) on a conservative finite-difference grid,
/// mean of W pinned by a Lagrange multiplier.
MeanResponse direct_bloch_response(const LaminateSpec& l, double omega, double q, cplx ebar, cplx vbar,
                                   int points = 4096);

/// Roots q(omega) of -q^2 Ceff + q w (Seff - Shat) + w^2 rhoeff = 0, operators
/// evaluated at (omega, q) self-consistently. direction picks the +q or -q branch.
struct DispersionPoint {
    double omega = 0.0;
    cplx q;
    double v_phase = 0.0;
    bool gap = false;  ///< no real root (|Im q| above tolerance) or no convergence
    EffectiveOperators ops;
};
std::vector<DispersionPoint> effective_dispersion(const LaminateSpec& l, std::span<const double> omegas,
                                                  int n_harmonics = 32, int direction = +1);

}  // namespace gel
