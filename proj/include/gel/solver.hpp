#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gel/lagrangian.hpp"

namespace gel {

enum class ModelVariant { classical, willis_temporal, willis_temporal_raw, wfe };

std::string_view to_string(ModelVariant v);
ModelVariant model_from_string(std::string_view s);
/// The Lagrangian whose Euler-Lagrange equation the variant integrates.
LagrangianVariant lagrangian_of(ModelVariant v);

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A named scalar recorded at every snapshot.
struct Monitor {
    std::string name;
    std::function<double(const WaveState&)> fn;
};

struct SolverConfig {
    double cfl = 0.5;
    int record_every = 1;
    bool monitor_energy = true;
    std::vector<Monitor> monitors;
    /// Abort when max|u| exceeds this factor times its early-time scale.
    double growth_limit = 1e6;
};

/// Two displacement levels of the leapfrog recursion; enough to restart.
struct LeapfrogState {
    Field u_prev;
    Field u;
    int step = 0;
};

struct Trajectory {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<WaveState> snapshots;
    std::vector<int> steps;
    std::map<std::string, std::vector<double>> monitors;
    LeapfrogState final_state;
};

/// dt_max = cfl * dx_min / (c_max * sqrt(d)), c_max^2 the largest ratio of the
/// acoustic tensor's top eigenvalue to the smallest density eigenvalue over
/// nodes and propagation directions. Coupling terms are lower order and do not
/// enter. Throws InputError for non-positive material.
double stability_estimate(const MaterialModel& m, const GridSpec& g, double cfl);
double max_wave_speed(const MaterialModel& m, const GridSpec& g);

/// Integral of T + W of the variant's density over the grid.
double energy_total(const Model& m, ModelVariant v, const WaveState& s);

/// Lower-order coupling coefficients of a variant, full-index layout:
/// stress  B_ijk  extra stress B_ijk w_k (w = udot for temporal, u for wfe)
/// rate    E_ijs  extra force E_ijs udot_j,s (temporal)
/// configurational S_kli  extra force -S_kli u_k,l (wfe)
/// restoring K_ik  extra force -K_ik u_k (wfe)
/// Empty fields for couplings the variant does not have.
struct CouplingFields {
    Field stress;
    Field rate;
    Field configurational;
    Field restoring;
};
CouplingFields coupling_fields(const Model& m, ModelVariant v);

class Solver {
public:
    /// Validates the model and fixes dt: grid.dt when positive (refused if above
    /// the cfl = 1 bound), otherwise the stability estimate at config.cfl.
    Solver(Model model, ModelVariant variant, SolverConfig config = {});

    double dt() const { return dt_; }
    const Model& model() const { return model_; }
    ModelVariant variant() const { return variant_; }

    /// rho^{-1} (div sigma + f + lower-order couplings) at time t.
    Field acceleration(const Field& u, const Field& udot, double t) const;

    /// Second-order Taylor start: u^{-1} = u0 - dt v0 + dt^2/2 a0.
    LeapfrogState start(const WaveState& initial) const;
    /// Next displacement level from (u^{n-1}, u^n).
    Field advance(const LeapfrogState& s) const;
    void step(LeapfrogState& s) const;

    /// Runs n_steps from s, recording every record_every-th level with the
    /// centered velocity. Throws NumericalError on non-finite or runaway fields.
    Trajectory run(LeapfrogState s, int n_steps) const;
    Trajectory simulate(const WaveState& initial, int n_steps) const { return run(start(initial), n_steps); }

    double time_of(int step) const { return t0_ + step * dt_; }
    void set_start_time(double t0) { t0_ = t0; }

private:
    Field principal(const Field& u) const;
    void apply_boundary(Field& u) const;

    Model model_;
    ModelVariant variant_;
    SolverConfig config_;
    double dt_ = 0.0;
    double t0_ = 0.0;

    std::vector<Field> face_C_;   // per axis, C averaged onto the face between p and p + e_axis
    Field rho_inv_;
    Field stress_coupling_;       // B_ijk: extra stress B_ijk * (udot_k or u_k)
    Field rate_coupling_;         // E_ijs: extra force E_ijs * udot_j,s
    Field configurational_;       // S_kli, WFE: extra force -S_kli u_k,l
    Field restoring_;             // K_ik, WFE: extra force -K_ik u_k
    bool has_rate_ = false;
};

}  // namespace gel
