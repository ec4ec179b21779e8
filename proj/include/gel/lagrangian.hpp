#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "gel/tensor_fields.hpp"

namespace gel {

enum class LagrangianVariant {
    l0_homogeneous,         ///< homogeneous medium, optional constant pre-stress
    l1_temporal_raw,        ///< temporal covariant derivative, quadratic connection term dropped
    l1_temporal_symmetric,  ///< temporal gauge fixed so the coupling is symmetric in (i, j)
    l1_spatial_wfe,         ///< spatial connection from the pre-strain gradient
};

std::string_view to_string(LagrangianVariant v);
LagrangianVariant lagrangian_from_string(std::string_view s);
inline constexpr std::array<LagrangianVariant, 4> kAllLagrangians{
    LagrangianVariant::l0_homogeneous, LagrangianVariant::l1_temporal_raw,
    LagrangianVariant::l1_temporal_symmetric, LagrangianVariant::l1_spatial_wfe};

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<double, 4>;
using Rank3 = std::array<double, 8>;
using Rank4 = std::array<double, 16>;

/// Material and initial-configuration coefficients at one point, full-index
/// layout with the point's dimension `dim` (unused trailing entries are zero).
struct PointParams {
    int dim = 1;
    Rank4 C{};
    Mat2 rho{};
    Mat2 sigma0{};
    Vec2 fbar0{};
    Vec2 f{};
    Vec2 v0{};
    Rank3 gamma{};       ///< Gamma_ij^k
    Mat2 fbar0_grad{};   ///< fbar0_{i,k}
};

/// Field values entering the density at one point: u_i, u_{i,j}, u_{i,t}.
struct Jet {
    Vec2 u{};
    Mat2 grad{};
    Vec2 udot{};
};

struct DensityBreakdown {
    double W = 0.0;
    double Phi = 0.0;
    double T = 0.0;
    double L = 0.0;  ///< W + Phi - T
};

/// Canonical derivatives at a point: fbar = -dL/du, sbar = dL/du_{,j},
/// pbar = -dL/du_{,t}, sigma_inc = sbar - sigma0.
struct CanonicalPoint {
    Vec2 fbar{};
    Mat2 sbar{};
    Vec2 pbar{};
    Mat2 sigma_inc{};
};

enum class Argument { u, grad, udot };

DensityBreakdown eval_density(LagrangianVariant v, const PointParams& p, const Jet& j);
CanonicalPoint canonical_point(LagrangianVariant v, const PointParams& p, const Jet& j);
/// Central finite difference of eval_density with step 1e-5 * (1 + |arg|).
/// Returns d (u, udot) or d*d (grad) entries.
std::array<double, 4> fd_derivative_point(LagrangianVariant v, const PointParams& p, const Jet& j, Argument which);

/// The realized pre-strain couplings of the spatial variant at a point.
struct WfeCoefficients {
    Rank3 stress_gradient{};  ///< C_ijkl Gamma_kl^s, index idx3(i,j,s)
    Vec2 w0_grad{};           ///< sigma0_ij Gamma_ij^r
    Mat2 w0_hess{};           ///< C_ijkl Gamma_ij^r Gamma_kl^s
};
WfeCoefficients wfe_coefficients(const PointParams& p);

/// Everything a density evaluation needs on a grid.
struct Model {
    GridSpec grid;
    MaterialModel material;
    PreState prestate;
    BodyForceModel forces;
};

/// Throws InputError when the variant needs pre-state members the model lacks.
void check_requirements(LagrangianVariant v, const Model& m);

/// Per-node parameters; the incremental force is taken at time t.
std::vector<PointParams> point_params(LagrangianVariant v, const Model& m, double t);
Jet jet_at(const GridSpec& g, const WaveState& s, const Field& grad_u, std::size_t node);

DensityBreakdown eval_density(LagrangianVariant v, const Model& m, const WaveState& s, std::size_t node);

struct CanonicalFields {
    Field fbar;
    Field sbar;
    Field pbar;
    Field sigma_inc;
};

CanonicalFields canonical_fields(LagrangianVariant v, const Model& m, const WaveState& s);
Field fd_functional_derivative(LagrangianVariant v, const Model& m, const WaveState& s, Argument which);

/// Density per node (L only).
Field density_field(LagrangianVariant v, const Model& m, const WaveState& s);

/// dL/du - (dL/du_{,j})_{,j} - (dL/du_{,t})_{,t} on the middle of three
/// equally spaced states.
Field el_residual(LagrangianVariant v, const Model& m, std::span<const WaveState> window);

/// Space-time midpoint quadrature of L over the whole grid and the time
/// cells [t_n - dt/2, t_n + dt/2] of the given snapshots.
double action(LagrangianVariant v, const Model& m, std::span<const WaveState> trajectory);

/// Uniform spacing of snapshot times; throws InputError if not uniform.
double uniform_step(std::span<const WaveState> states);

}  // namespace gel
