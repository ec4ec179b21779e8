#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gel/grid.hpp"

namespace gel {

/// Elasticity tensor C_ijkl and density tensor rho_ij sampled per node,
/// stored with full indices (d^4 and d^2 components).
struct MaterialModel {
    Field C;
    Field rho;

    static MaterialModel uniform_1d(const GridSpec& g, double stiffness, double density);
    static MaterialModel isotropic(const GridSpec& g, double lambda, double mu, double density);
    /// Per-node scalar stiffness/density (1D) from callables of x.
    static MaterialModel profile_1d(const GridSpec& g, const std::function<double(double)>& stiffness,
                                    const std::function<double(double)>& density);
};

/// Outcome of validate_material: violations are reported, not thrown.
struct MaterialReport {
    bool pass = true;
    double worst_symmetry_defect = 0.0;  ///< relative to the node's max |C|
    std::size_t worst_symmetry_node = 0;
    std::string worst_symmetry_where;    ///< e.g. "C_0001 vs C_0100"
    double min_stiffness_eigenvalue = 0.0;
    double min_density_eigenvalue = 0.0;
    std::size_t min_eigen_node = 0;
    std::vector<std::string> messages;
};

MaterialReport validate_material(const GridSpec& g, const MaterialModel& m, double tol = 1e-12);

/// Initial-configuration data. Members are empty Fields when not available;
/// Gamma-dependent paths require u0.
struct PreState {
    Field u0;      ///< u0_i
    Field G0;      ///< u0_{i,j}
    Field gamma;   ///< Gamma_ij^k = u0_{i,jk}, index idx3(i,j,k)
    Field sigma0;  ///< sigma0_ij
    Field v0;      ///< background relative velocity u0_{i,t}
    Field fbar0;   ///< effective body force in the initial configuration

    bool has_u0() const { return !u0.empty(); }
    bool has_gamma() const { return !gamma.empty(); }

    static PreState zero(const GridSpec& g);
};

/// Builds the pre-state from a displacement field: G0, Gamma, sigma0 = C:G0 and
/// fbar0 = -div sigma0 are all derived. v0 may be empty (treated as zero).
PreState derive_prestate(const GridSpec& g, const MaterialModel& m, const Field& u0, const Field& v0 = {});

/// Same from a displacement gradient G0 (u0 stays empty): Gamma = grad G0.
PreState derive_prestate_from_gradient(const GridSpec& g, const MaterialModel& m, const Field& G0,
                                       const Field& v0 = {});

/// Builds the pre-state from a directly supplied pre-stress and velocity;
/// u0, G0 and Gamma stay empty.
PreState direct_prestate(const GridSpec& g, const Field& sigma0, const Field& v0 = {});

/// Ricker wavelet applied at the node nearest `position`.
struct PointSource {
    std::array<double, 2> position{0.0, 0.0};
    std::array<double, 2> direction{1.0, 0.0};
    double amplitude = 1.0;
    double peak_frequency = 1.0;
    double delay = 1.0;
};

double ricker(double t, double peak_frequency, double delay);

struct BodyForceModel {
    Field f0;                                 ///< static body force (may be empty)
    Field pattern;                            ///< spatial pattern of f (may be empty)
    std::function<double(double)> signature;  ///< time factor for `pattern`
    std::optional<PointSource> point;

    /// Incremental force f_i(x, t); throws InputError if any entry is non-finite.
    Field evaluate(const GridSpec& g, double t) const;
    bool active() const { return !pattern.empty() || point.has_value(); }
};

struct WaveState {
    Field u;
    Field udot;
    double t = 0.0;
};

// Discrete differential operators. Second-order central differences with
// periodic wrap, one-sided second-order stencils at non-periodic ends.

Field grad(const GridSpec& g, const Field& f, int axis);
/// Component c of f, axis a -> component c*d + a.
Field gradient(const GridSpec& g, const Field& f);
/// Row divergence of a rank-2 field: (div T)_i = T_ij,j.
Field div(const GridSpec& g, const Field& t);
/// e_ij = (u_i,j + u_j,i) / 2.
Field strain(const GridSpec& g, const Field& u);

/// sigma0_ij = C_ijkl G0_kl pointwise.
Field hooke_pre_stress(const GridSpec& g, const Field& C, const Field& G0);
/// Gamma_ij^k = u0_{i,jk} by nested central differences.
Field spatial_connection(const GridSpec& g, const Field& u0);
/// T_ij^k = Gamma_ij^k - Gamma_ji^k.
Field torsion(int dim, const Field& gamma);
/// Gamma_ij^k - Gamma_ik^j; vanishes to truncation error for a single-valued u0.
Field connection_asymmetry(int dim, const Field& gamma);
/// sigma0_ij,k, index idx3(i,j,k).
Field stress_gradient(const GridSpec& g, const Field& sigma0);
/// fbar0 = -div sigma0.
Field equilibrium_body_force(const GridSpec& g, const Field& sigma0);

/// max_i |sigma0_ij,j + fbar0_i| on interior nodes (all nodes when periodic).
double equilibrium_residual(const GridSpec& g, const Field& sigma0, const Field& fbar0);

/// Grid of coordinates: component a holds the a-th coordinate of each node.
Field coordinates(const GridSpec& g);
/// Samples a d-component field from a callable (x, y) -> value for component c.
Field sample(const GridSpec& g, int components, const std::function<double(int, double, double)>& fn);

}  // namespace gel
