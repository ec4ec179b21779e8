#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gel/expression.hpp"
#include "gel/lagrangian.hpp"

namespace gel {

/// u_{i;t} = u_{i,t} - u_{i,j} v0_j
Field cov_dt(const GridSpec& g, const WaveState& s, const Field& v0);
/// u_{i;j} = u_{i,j} + Gamma_ij^k u_k
Field cov_dx(const GridSpec& g, const Field& u, const Field& gamma);

enum class TransformKind {
    temporal,     ///< time shift dt(x,t) with du = u_{;t} dt
    spatial,      ///< space shift dx_j(x,t) with du = u_{;j} dx_j
    translation,  ///< plain coordinate shift carrying field values along (du = 0)
    custom,       ///< user supplied; physical meaning unverified
};

std::string_view to_string(TransformKind k);

/// Coordinate perturbation dx (d spatial components then the time component)
/// and field perturbation du at the nodes of a grid.
struct LocalTransform {
    TransformKind kind = TransformKind::custom;
    Field dx;
    Field du;
    double eps = 1.0;
};

/// amplitude: one component (temporal, time-translation: the time shift) or d
/// components (spatial, space translation: the spatial shift), scaled by eps.
LocalTransform build_transform(TransformKind kind, const Field& amplitude, const GridSpec& g, const WaveState& s,
                               const PreState& pre, double eps = 1.0);

/// P_a = (L delta_ab - dL/du_{i,a} u_{i,b}) dx_b + dL/du_{i,a} du_i, components
/// (spatial axes..., t).
Field noether_current(LagrangianVariant v, const Model& m, const WaveState& s, const LocalTransform& tr);

struct DivergenceResult {
    std::vector<Field> residual;  ///< one per interior time level
    double rms = 0.0;
    double max = 0.0;
};

/// Discrete P_a,a on the interior levels of equally spaced current snapshots.
DivergenceResult noether_divergence(const GridSpec& g, std::span<const Field> currents, double dt);

/// Adds the space-time curl of q to the currents on interior levels; q has one
/// component in 1D (stream function) and three (x, y, t) in 2D. The result has
/// two fewer levels than the input.
std::vector<Field> add_spacetime_curl(const GridSpec& g, std::span<const Field> currents, std::span<const Field> q,
                                      double dt);

/// Node-index box [lo, hi] per axis; an empty optional means the whole grid
/// (which must then be periodic for the flux side to vanish).
struct IndexBox {
    std::array<int, 2> lo{0, 0};
    std::array<int, 2> hi{0, 0};
};

struct BalanceSeries {
    std::vector<double> t;    ///< interior snapshot times
    std::vector<double> lhs;  ///< d/dt of the volume integral
    std::vector<double> rhs;  ///< boundary flux
    double max_defect = 0.0;  ///< max |lhs - rhs|
    double scale = 0.0;       ///< max |lhs|, |rhs| for relative reporting
    double mean_defect = 0.0; ///< |mean(lhs - rhs)| over the series
    double el_rms = 0.0;      ///< Euler-Lagrange residual RMS on the middle snapshot
};

/// Temporal-gauge balance d/dt int (L + sign * p_i u_{i,j} v0_j) dV
///  = surface int sbar_ik u_{i,j} v0_j dS_k, using the symmetric
/// temporal Lagrangian. sign = -1 is the form usually quoted; +1 is what the
/// Noether current of the temporal gauge transform actually produces.
BalanceSeries conservation_temporal(const Model& m, std::span<const WaveState> trajectory,
                                    std::optional<IndexBox> box = std::nullopt, double sign = -1.0);

/// Spatial-gauge balance along axis j: d/dt int p_i Gamma_ij^r u_r dV
///  = surface int (L delta_kj + sbar_ik Gamma_ij^r u_r) dS_k (pre-strain Lagrangian).
BalanceSeries conservation_spatial(const Model& m, std::span<const WaveState> trajectory,
                                   std::optional<IndexBox> box = std::nullopt, int axis = 0);

/// Analytic medium for the invariance harness: every coefficient and the trial
/// displacement are expressions of (x, y, t), so all derivatives are exact.
struct AnalyticMedium {
    int dim = 1;
    Expression stiffness = Expression::constant(1.0);  ///< C in 1D, lambda in 2D
    Expression shear = Expression::constant(0.0);      ///< mu in 2D
    Expression density = Expression::constant(1.0);
    std::array<Expression, 2> u0;  ///< pre-displacement (may depend on t)
    std::array<Expression, 2> u;   ///< trial incremental displacement
};

/// Gaussian-profiled local transform over a space-time box.
struct TransformProfile {
    TransformKind kind = TransformKind::temporal;
    std::array<double, 3> center{0.0, 0.0, 0.0};  ///< (x, y, t)
    std::array<double, 3> width{1.0, 1.0, 1.0};
    std::array<double, 2> direction{1.0, 0.0};    ///< spatial shift direction
    double half_extent = 7.0;                     ///< box half size in widths
    std::array<int, 3> points{96, 96, 96};        ///< quadrature points per axis
};

/// A[transformed] - A over the profile's box: the transformed field
/// u'(x') = u(x) + du(x) at x' = x + dx, gradients by the chain rule through the
/// exact Jacobian of x -> x', and the medium (including the body force that
/// makes u an exact solution of `forcing` variant's equations) evaluated at x'.
/// Throws InputError where the Jacobian is not positive.
double action_defect(LagrangianVariant v, const AnalyticMedium& medium, LagrangianVariant forcing,
                     const TransformProfile& profile, double eps);

struct SlopeFit {
    std::vector<double> eps;
    std::vector<double> defect;
    double slope = 0.0;
};

SlopeFit defect_slope(LagrangianVariant v, const AnalyticMedium& medium, LagrangianVariant forcing,
                      const TransformProfile& profile, std::span<const double> eps_values);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace gel
