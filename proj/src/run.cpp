#include "gel/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "gel/checks.hpp"
#include "gel/csv_io.hpp"
#include "gel/gauge.hpp"

namespace gel {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Var = Expression::Var;

Field sample_expressions(const GridSpec& g, const std::vector<std::string>& exprs, double t = 0.0) {
    std::vector<Expression> e;
    for (const auto& s : exprs) e.push_back(Expression::parse(s));
    return sample(g, static_cast<int>(e.size()),
                  [&](int c, double x, double y) { return e[static_cast<std::size_t>(c)](x, y, t); });
}

Field sample_scalar(const GridSpec& g, const ScalarInput& s) {
    if (!s.is_expr()) return Field(1, g.nodes(), s.value);
    return sample_expressions(g, {s.expr});
}

fs::path resolve(const fs::path& base, const std::string& file) {
    const fs::path p(file);
    return p.is_absolute() || base.empty() ? p : base / p;
}

// Sum of three low modes per component, periodic over the grid extent.
Field random_smooth(const GridSpec& g, int components, unsigned seed, double amplitude) {
    std::mt19937_64 rng(seed);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    struct Mode {
        int kx, ky;
        double a, ph;
    };
    std::vector<std::vector<Mode>> modes(static_cast<std::size_t>(components));
    for (auto& ms : modes)
        for (int k = 0; k < 3; ++k)
            ms.push_back({static_cast<int>(uni(1, 3.999)), g.dim == 2 ? static_cast<int>(uni(0, 2.999)) : 0,
                          uni(-amplitude, amplitude), uni(0, 2 * std::numbers::pi)});
    const double Lx = g.length(0), Ly = g.dim == 2 ? g.length(1) : 1.0;
    return sample(g, components, [&](int c, double x, double y) {
        double s = 0.0;
        for (const auto& m : modes[static_cast<std::size_t>(c)])
            s += m.a * std::sin(2 * std::numbers::pi * (m.kx * x / Lx + m.ky * y / Ly) + m.ph);
        return s;
    });
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    out << text;
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a(canonical_config(c))); }

fs::path out_dir(const RunConfig& c, const RunOptions& o) {
    if (!o.out_dir.empty()) return o.out_dir;
    return resolve(c.base_dir, c.output.dir);
}

std::string step_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%08d", step);
    return buf;
}

void write_failure(const fs::path& dir, const std::string& kind, const std::string& message,
                   const std::vector<std::string>& details = {}) {
    try {
        json j = {{"kind", kind}, {"message", message}};
        if (!details.empty()) j["errors"] = details;
        write_text(dir / "failure.json", j.dump(2) + "\n");
    } catch (const std::exception&) {
        // nothing more to report to
    }
}

template <class F>
int guarded(const fs::path& dir, std::ostream* log, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        if (log) *log << "config error: " << e.what() << '\n';
        write_failure(dir, "config", e.what(), e.errors());
        return kConfigError;
    } catch (const InputError& e) {
        if (log) *log << "input error: " << e.what() << '\n';
        write_failure(dir, "input", e.what());
        return kConfigError;
    } catch (const ExpressionError& e) {
        if (log) *log << "expression error: " << e.what() << '\n';
        write_failure(dir, "input", e.what());
        return kConfigError;
    } catch (const HomogenizerError& e) {
        // bad laminate or a comparison-medium pole: the user has to change the input
        if (log) *log << "homogenizer input error: " << e.what() << '\n';
        write_failure(dir, "input", e.what());
        return kConfigError;
    } catch (const NumericalError& e) {
        if (log) *log << "numerical failure: " << e.what() << '\n';
        write_failure(dir, "numerical", e.what());
        return kRuntimeError;
    } catch (const std::exception& e) {
        if (log) *log << "runtime error: " << e.what() << '\n';
        write_failure(dir, "runtime", e.what());
        return kRuntimeError;
    }
}

}  // namespace

PreState prestate_from_expressions(const GridSpec& g, const MaterialModel& m, const std::vector<std::string>& u0,
                                   const std::vector<std::string>& v0, double t) {
    if (static_cast<int>(u0.size()) != g.dim) throw InputError("u0 needs one expression per displacement component");
    const Field u = sample_expressions(g, u0, t);
    Field v;
    if (!v0.empty()) {
        if (v0.size() != u0.size()) throw InputError("v0 needs one expression per displacement component");
        v = sample_expressions(g, v0, t);
    } else {
        std::vector<Expression> dt;
        for (const auto& s : u0) dt.push_back(Expression::parse(s).derivative(Var::t));
        v = sample(g, g.dim, [&](int c, double x, double y) { return dt[static_cast<std::size_t>(c)](x, y, t); });
    }
    return derive_prestate(g, m, u, v);
}

MaterialModel build_material(const GridSpec& g, const MaterialConfig& mc, const fs::path& base) {
    const int d = g.dim;
    if (!mc.file.empty()) {
        const FieldFile ff = read_field_csv(resolve(base, mc.file), g);
        std::vector<std::string> want = tensor_names("C", d, 4);
        for (const auto& n : tensor_names("rho", d, 2)) want.push_back(n);
        if (ff.names != want) throw InputError(mc.file + ": expected columns C_ijkl then rho_ij in index order");
        MaterialModel m;
        m.C = Field(tensor_size(d, 4), g.nodes());
        m.rho = Field(d * d, g.nodes());
        for (std::size_t p = 0; p < g.nodes(); ++p) {
            for (int c = 0; c < tensor_size(d, 4); ++c) m.C(c, p) = ff.field(c, p);
            for (int c = 0; c < d * d; ++c) m.rho(c, p) = ff.field(tensor_size(d, 4) + c, p);
        }
        return m;
    }
    const Field rho = sample_scalar(g, mc.rho);
    MaterialModel m;
    m.rho = Field(d * d, g.nodes());
    m.C = Field(tensor_size(d, 4), g.nodes());
    if (d == 1) {
        const Field C = sample_scalar(g, mc.C);
        m.C = C;
        m.rho = rho;
        return m;
    }
    const Field lam = sample_scalar(g, mc.lambda), mu = sample_scalar(g, mc.mu);
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (std::size_t p = 0; p < g.nodes(); ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                m.rho(idx2(d, i, j), p) = delta(i, j) * rho(0, p);
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        m.C(idx4(d, i, j, k, l), p) = lam(0, p) * delta(i, j) * delta(k, l) +
                                                       mu(0, p) * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
            }
    return m;
}

Model build_model(const SimulateConfig& s, const fs::path& base) {
    Model m;
    m.grid = s.grid;
    m.grid.validate();
    m.material = build_material(m.grid, s.material, base);
    const GridSpec& g = m.grid;
    const int d = g.dim;
    const PrestateConfig& pc = s.prestate;
    const Field v0 = pc.v0.empty() ? Field() : sample_expressions(g, pc.v0);
    if (!pc.u0.empty()) {
        m.prestate = prestate_from_expressions(g, m.material, pc.u0, pc.v0);
    } else if (!pc.u0_file.empty()) {
        const FieldFile ff = read_field_csv(resolve(base, pc.u0_file), g);
        if (ff.field.components() != d) throw InputError(pc.u0_file + ": expected " + std::to_string(d) + " columns");
        m.prestate = derive_prestate(g, m.material, ff.field, v0);
    } else if (!pc.sigma0.empty()) {
        m.prestate = direct_prestate(g, sample_expressions(g, pc.sigma0), v0);
    } else if (!pc.sigma0_file.empty()) {
        const FieldFile ff = read_field_csv(resolve(base, pc.sigma0_file), g);
        if (ff.field.components() != d * d) throw InputError(pc.sigma0_file + ": expected sigma0_ij columns");
        m.prestate = direct_prestate(g, ff.field, v0);
    } else {
        m.prestate = PreState::zero(g);
        if (!v0.empty()) m.prestate.v0 = v0;
    }
    if (s.source) m.forces.point = *s.source;
    return m;
}

WaveState build_initial(const SimulateConfig& s, const GridSpec& g) {
    WaveState w;
    if (s.initial.random) {
        w.u = random_smooth(g, g.dim, s.initial.seed, s.initial.amplitude);
        w.udot = random_smooth(g, g.dim, s.initial.seed + 1, s.initial.amplitude);
    } else {
        w.u = sample_expressions(g, s.initial.u);
        w.udot = sample_expressions(g, s.initial.udot);
    }
    return w;
}

int run_simulate(const RunConfig& c, const RunOptions& o) {
    const fs::path dir = out_dir(c, o);
    return guarded(dir, o.log, [&] {
        const SimulateConfig& s = c.simulate;
        const Model m = build_model(s, c.base_dir);
        const WaveState init = build_initial(s, m.grid);
        SolverConfig sc;
        sc.cfl = s.cfl;
        sc.record_every = s.record_every;
        sc.growth_limit = s.growth_limit;
        sc.monitor_energy = std::find(s.monitors.begin(), s.monitors.end(), "energy") != s.monitors.end();
        const Solver solver(m, s.variant, sc);
        if (o.log)
            *o.log << "simulate " << to_string(s.variant) << ": " << m.grid.nodes() << " nodes, dt "
                   << format_double(solver.dt()) << ", " << m.grid.n_steps << " steps\n";
        const Trajectory tr = solver.simulate(init, m.grid.n_steps);

        fs::create_directories(dir);
        const int d = m.grid.dim;
        std::vector<std::string> names;
        for (const auto& n : tensor_names("u", d, 1)) names.push_back(n);
        for (const auto& n : tensor_names("udot", d, 1)) names.push_back(n);
        auto write_snapshot = [&](const WaveState& w, int step) {
            Field f(2 * d, m.grid.nodes());
            for (int i = 0; i < d; ++i)
                for (std::size_t p = 0; p < m.grid.nodes(); ++p) {
                    f(i, p) = w.u(i, p);
                    f(d + i, p) = w.udot(i, p);
                }
            write_field_csv(dir / "snapshots" / ("state_" + step_name(step) + ".csv"), m.grid, f, names, w.t);
        };
        if (c.output.snapshots) {
            for (std::size_t k = 0; k < tr.snapshots.size(); ++k) write_snapshot(tr.snapshots[k], tr.steps[k]);
        } else if (!tr.snapshots.empty()) {
            write_snapshot(tr.snapshots.back(), tr.steps.back());
        }

        std::vector<std::string> header{"step", "t"};
        for (const auto& [name, series] : tr.monitors) header.push_back(name);
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
            std::vector<double> r{static_cast<double>(tr.steps[k]), tr.snapshots[k].t};
            for (const auto& [name, series] : tr.monitors) r.push_back(series[k]);
            rows.push_back(std::move(r));
        }
        write_table_csv(dir / "monitors.csv", header, rows);

        json summary = {{"mode", "simulate"},
                        {"variant", std::string(to_string(s.variant))},
                        {"dt", solver.dt()},
                        {"steps", m.grid.n_steps},
                        {"snapshots", tr.snapshots.size()},
                        {"final_max_abs_u", tr.final_state.u.max_abs()},
                        {"config_hash", config_hash(c)}};
        auto balance = [&](const std::string& name, const BalanceSeries& b) {
            std::vector<std::vector<double>> br;
            for (std::size_t k = 0; k < b.t.size(); ++k) br.push_back({b.t[k], b.lhs[k], b.rhs[k], b.lhs[k] - b.rhs[k]});
            write_table_csv(dir / (name + ".csv"), {"t", "lhs", "rhs", "defect"}, br);
            summary[name] = {{"max_defect", b.max_defect}, {"scale", b.scale}, {"el_rms", b.el_rms}};
        };
        for (const auto& mon : s.monitors) {
            if (mon == "conservation_temporal") balance("balance_temporal", conservation_temporal(m, tr.snapshots));
            if (mon == "conservation_spatial")
                for (int a = 0; a < d; ++a)
                    balance("balance_spatial_" + std::to_string(a), conservation_spatial(m, tr.snapshots, std::nullopt, a));
        }
        write_text(dir / "config.json", canonical_config(c) + "\n");
        write_text(dir / "summary.json", summary.dump(2) + "\n");
        if (o.log) *o.log << "wrote " << tr.snapshots.size() << " records to " << dir.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int run_homogenize(const RunConfig& c, const RunOptions& o) {
    const fs::path dir = out_dir(c, o);
    return guarded(dir, o.log, [&] {
        const HomogenizeConfig& h = c.homogenize;
        validate(h.laminate);
        std::vector<std::vector<double>> rows;
        for (double w : h.omegas) {
            const BlochPoint b{w, h.q, h.n_harmonics};
            const EffectiveOperators e = effective_operators(h.laminate, b);
            const EffectiveOperators s = second_order_operators(h.laminate, b);
            rows.push_back({w, h.q, e.Ceff.real(), e.Ceff.imag(), e.rhoeff.real(), e.rhoeff.imag(), e.Seff.real(),
                            e.Seff.imag(), e.Shat.real(), e.Shat.imag(), e.rcond, s.Ceff.real(), s.rhoeff.real(),
                            s.Seff.real(), s.Seff.imag(), std::abs(s.Seff - e.Seff)});
        }
        fs::create_directories(dir);
        write_table_csv(dir / "effective.csv",
                        {"omega", "q", "Ceff_re", "Ceff_im", "rhoeff_re", "rhoeff_im", "Seff_re", "Seff_im", "Shat_re",
                         "Shat_im", "rcond", "Ceff2_re", "rhoeff2_re", "Seff2_re", "Seff2_im", "Seff_gap"},
                        rows);
        json summary = {{"mode", "homogenize"},
                        {"points", h.omegas.size()},
                        {"harmonic_stiffness", harmonic_stiffness(h.laminate)},
                        {"mean_density", mean_density(h.laminate)},
                        {"static_limit", static_limit(h.laminate, h.n_harmonics)},
                        {"config_hash", config_hash(c)}};
        if (h.dispersion) {
            std::vector<std::vector<double>> dr;
            for (int dir_sign : {+1, -1})
                for (const DispersionPoint& p : effective_dispersion(h.laminate, h.omegas, h.n_harmonics, dir_sign))
                    dr.push_back({p.omega, static_cast<double>(dir_sign), p.q.real(), p.q.imag(), p.v_phase,
                                  p.gap ? 1.0 : 0.0});
            write_table_csv(dir / "dispersion.csv", {"omega", "branch", "q_re", "q_im", "v_phase", "gap"}, dr);
        }
        write_text(dir / "config.json", canonical_config(c) + "\n");
        write_text(dir / "summary.json", summary.dump(2) + "\n");
        if (o.log) *o.log << "homogenize: " << h.omegas.size() << " points written to " << dir.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int run_verify(const RunConfig& c, const RunOptions& o) {
    const fs::path dir = out_dir(c, o);
    return guarded(dir, o.log, [&] {
        const std::vector<std::string>& suites = o.suites.empty() ? c.verify.suites : o.suites;
        VerifyReport rep = run_suites(suites, c.verify.tolerances, c.verify.seed);
        rep.config_hash = config_hash(c);

        std::ostringstream txt;
        json checks = json::array();
        for (const CheckRecord& r : rep.checks) {
            char line[512];
            std::snprintf(line, sizeof line, "%s  %-14s %-30s %-40s measured %-12.6g %s %-9.3g %s\n",
                          r.pass ? "PASS" : "FAIL", r.suite.c_str(), r.name.c_str(), ("[" + r.reference + "]").c_str(),
                          r.measured, r.at_least ? ">=" : "<=", r.tolerance, r.detail.c_str());
            txt << line;
            checks.push_back({{"suite", r.suite},
                              {"name", r.name},
                              {"reference", r.reference},
                              {"measured", std::isfinite(r.measured) ? json(r.measured) : json(nullptr)},
                              {"tolerance", r.tolerance},
                              {"relation", r.at_least ? ">=" : "<="},
                              {"pass", r.pass},
                              {"detail", r.detail}});
        }
        txt << rep.passed << " passed, " << rep.failed << " failed; config " << rep.config_hash << '\n';
        const json report = {{"checks", checks},
                             {"passed", rep.passed},
                             {"failed", rep.failed},
                             {"config_hash", rep.config_hash}};
        fs::create_directories(dir);
        write_text(dir / "report.txt", txt.str());
        write_text(dir / "report.json", report.dump(2) + "\n");
        if (o.log) *o.log << txt.str();
        return static_cast<int>(rep.failed == 0 ? kOk : kCheckFailed);
    });
}

int run(const RunConfig& c, const RunOptions& o) {
    switch (c.mode) {
    case RunMode::simulate: return run_simulate(c, o);
    case RunMode::homogenize: return run_homogenize(c, o);
    case RunMode::verify: return run_verify(c, o);
    }
    return kRuntimeError;
}

}  // namespace gel
