#include "gel/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "gel/expression.hpp"

namespace gel {

using json = nlohmann::json;

const std::vector<std::string> kVerifySuites{"euler-lagrange", "invariance", "conservation", "homogenizer", "limits"};

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "\n  " : "  ") + v[i];
    return s;
}

const std::vector<std::string> kMonitors{"energy", "conservation_temporal", "conservation_spatial"};

std::string type_name(const json& j) { return j.type_name(); }

// Walks one JSON object: declares its allowed keys, reports unknown ones with
// the closest allowed spelling, and collects typed reads with key paths.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& errs, std::vector<std::string> allowed)
        : j_(j), path_(std::move(path)), errs_(errs), allowed_(std::move(allowed)) {
        if (!j_.is_object()) {
            error(path_, "expected an object, got " + type_name(j_));
            ok_ = false;
            return;
        }
        for (const auto& [key, _] : j_.items()) {
            if (std::find(allowed_.begin(), allowed_.end(), key) != allowed_.end()) continue;
            std::string msg = "unknown key";
            std::string best;
            std::size_t best_d = std::string::npos;
            for (const auto& a : allowed_) {
                const std::size_t d = edit_distance(key, a);
                if (d < best_d) best_d = d, best = a;
            }
            if (!best.empty() && best_d <= std::max<std::size_t>(2, key.size() / 3))
                msg += "; did you mean '" + best + "'?";
            error(at(key), msg);
        }
    }

    bool ok() const { return ok_; }
    bool has(const std::string& k) const { return ok_ && j_.contains(k); }
    std::string at(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
    void error(const std::string& where, const std::string& msg) const { errs_.push_back(where + ": " + msg); }
    const json& raw(const std::string& k) const { return j_.at(k); }

    Reader item(const json& e, const std::string& where, std::vector<std::string> allowed) const {
        return Reader(e, where, errs_, std::move(allowed));
    }

    Reader child(const std::string& k, std::vector<std::string> allowed) const {
        static const json empty = json::object();
        return Reader(has(k) ? j_.at(k) : empty, at(k), errs_, std::move(allowed));
    }

    double number(const std::string& k, double def) const {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_number()) {
            error(at(k), "expected a number, got " + type_name(v));
            return def;
        }
        return v.get<double>();
    }

    int integer(const std::string& k, int def) const {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_number_integer()) {
            error(at(k), "expected an integer, got " + type_name(v));
            return def;
        }
        return v.get<int>();
    }

    bool boolean(const std::string& k, bool def) const {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_boolean()) {
            error(at(k), "expected true or false, got " + type_name(v));
            return def;
        }
        return v.get<bool>();
    }

    std::string string(const std::string& k, const std::string& def) const {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        if (!v.is_string()) {
            error(at(k), "expected a string, got " + type_name(v));
            return def;
        }
        return v.get<std::string>();
    }

    // a scalar or an array of `count` scalars
    std::vector<double> numbers(const std::string& k, std::vector<double> def, std::size_t count) const {
        if (!has(k)) return def;
        const json& v = j_.at(k);
        std::vector<double> out;
        if (v.is_number()) {
            out.assign(count, v.get<double>());
            return out;
        }
        if (!v.is_array() || (count && v.size() != count)) {
            error(at(k), count ? "expected a number or an array of " + std::to_string(count) + " numbers"
                               : "expected an array of numbers");
            return def;
        }
        for (const auto& e : v) {
            if (!e.is_number()) {
                error(at(k), "array entries must be numbers");
                return def;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    // a string or an array of strings, each a valid expression
    std::vector<std::string> expressions(const std::string& k, std::size_t count) const {
        if (!has(k)) return {};
        const json& v = j_.at(k);
        std::vector<std::string> out;
        if (v.is_string()) out.push_back(v.get<std::string>());
        else if (v.is_array())
            for (const auto& e : v) {
                if (!e.is_string()) {
                    error(at(k), "expected expression strings");
                    return {};
                }
                out.push_back(e.get<std::string>());
            }
        else {
            error(at(k), "expected an expression string or an array of them");
            return {};
        }
        if (out.size() != count) {
            error(at(k), "expected " + std::to_string(count) + " expression(s), got " + std::to_string(out.size()));
            return {};
        }
        for (std::size_t i = 0; i < out.size(); ++i) check_expression(at(k), out[i]);
        return out;
    }

    ScalarInput scalar(const std::string& k, double def) const {
        if (!has(k)) return {def, {}};
        const json& v = j_.at(k);
        if (v.is_number()) return {v.get<double>(), {}};
        if (v.is_string()) {
            check_expression(at(k), v.get<std::string>());
            return {0.0, v.get<std::string>()};
        }
        error(at(k), "expected a number or an expression string, got " + type_name(v));
        return {def, {}};
    }

    void check_expression(const std::string& where, const std::string& text) const {
        try {
            (void)Expression::parse(text);
        } catch (const ExpressionError& e) {
            error(where, std::string("bad expression '") + text + "': " + e.what());
        }
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& errs_;
    std::vector<std::string> allowed_;
    bool ok_ = true;
};

GridSpec read_grid(const Reader& r) {
    GridSpec g;
    g.dim = r.integer("dim", 1);
    if (g.dim != 1 && g.dim != 2) {
        r.error(r.at("dim"), "must be 1 or 2");
        g.dim = 1;
    }
    const std::size_t d = static_cast<std::size_t>(g.dim);
    std::vector<int> n(d, 128);
    if (r.has("n")) {
        const json& v = r.raw("n");
        if (v.is_number_integer()) n.assign(d, v.get<int>());
        else if (v.is_array() && v.size() == d && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); }))
            n = v.get<std::vector<int>>();
        else r.error(r.at("n"), "expected an integer or an array of " + std::to_string(d) + " integers");
    }
    g.n = {n[0], d == 2 ? n[1] : 1};
    const std::string bc = r.string("bc", "periodic");
    try {
        g.bc = boundary_from_string(bc);
    } catch (const InputError&) {
        r.error(r.at("bc"), "unknown boundary '" + bc + "' (periodic, fixed-displacement, traction-free)");
    }
    if (r.has("dx") && r.has("length")) r.error(r.at("dx"), "give either dx or length, not both");
    const std::vector<double> dx = r.numbers("dx", {}, d);
    const std::vector<double> len = r.numbers("length", std::vector<double>(d, 2.0 * std::numbers::pi), d);
    for (std::size_t a = 0; a < d; ++a) {
        if (!dx.empty()) g.dx[a] = dx[a];
        else {
            const int cells = g.bc == Boundary::periodic ? g.n[a] : g.n[a] - 1;
            g.dx[a] = len[a] / std::max(cells, 1);
        }
    }
    g.dt = r.number("dt", 0.0);
    if (g.dt < 0.0) r.error(r.at("dt"), "must be >= 0 (0 picks the stability estimate)");
    g.n_steps = r.integer("steps", 1000);
    if (g.n_steps < 1) r.error(r.at("steps"), "must be >= 1");
    try {
        g.validate(g.dim * g.dim * g.dim * g.dim);
    } catch (const InputError& e) {
        r.error(r.at("n"), e.what());
    }
    return g;
}

SimulateConfig read_simulate(const Reader& r) {
    SimulateConfig s;
    s.grid = read_grid(r.child("grid", {"dim", "n", "dx", "length", "dt", "steps", "bc"}));
    const int d = s.grid.dim;
    const std::size_t du = static_cast<std::size_t>(d), d2 = du * du;

    const Reader m = r.child("material", {"file", "C", "lambda", "mu", "rho"});
    s.material.file = m.string("file", "");
    s.material.C = m.scalar("C", 1.0);
    s.material.lambda = m.scalar("lambda", 1.0);
    s.material.mu = m.scalar("mu", 1.0);
    s.material.rho = m.scalar("rho", 1.0);
    if (d == 1 && (m.has("lambda") || m.has("mu"))) m.error(m.at("lambda"), "lambda/mu are 2D inputs; use C in 1D");
    if (d == 2 && m.has("C")) m.error(m.at("C"), "C is the 1D stiffness; use lambda and mu in 2D");

    const Reader p = r.child("prestate", {"u0", "v0", "sigma0", "u0_file", "sigma0_file"});
    s.prestate.u0 = p.expressions("u0", du);
    s.prestate.v0 = p.expressions("v0", du);
    s.prestate.sigma0 = p.expressions("sigma0", d2);
    s.prestate.u0_file = p.string("u0_file", "");
    s.prestate.sigma0_file = p.string("sigma0_file", "");
    const int given = !s.prestate.u0.empty() + !s.prestate.sigma0.empty() + !s.prestate.u0_file.empty() +
                      !s.prestate.sigma0_file.empty();
    if (given > 1) p.error(p.at("u0"), "give one of u0, sigma0, u0_file, sigma0_file");

    const std::string variant = r.string("variant", "classical");
    try {
        s.variant = model_from_string(variant);
    } catch (const InputError&) {
        r.error(r.at("variant"), "unknown variant '" + variant + "' (classical, willis-temporal, willis-temporal-raw, wfe)");
    }

    const Reader sv = r.child("solver", {"cfl", "record_every", "growth_limit", "monitors"});
    s.cfl = sv.number("cfl", 0.5);
    if (!(s.cfl > 0.0 && s.cfl <= 1.0)) sv.error(sv.at("cfl"), "must lie in (0, 1]");
    s.record_every = sv.integer("record_every", 1);
    if (s.record_every < 1) sv.error(sv.at("record_every"), "must be >= 1");
    s.growth_limit = sv.number("growth_limit", 1e6);
    if (!(s.growth_limit > 1.0)) sv.error(sv.at("growth_limit"), "must exceed 1");
    if (sv.has("monitors")) {
        const json& v = sv.raw("monitors");
        s.monitors.clear();
        if (!v.is_array()) sv.error(sv.at("monitors"), "expected an array of monitor names");
        else
            for (const auto& e : v) {
                const std::string name = e.is_string() ? e.get<std::string>() : "";
                if (std::find(kMonitors.begin(), kMonitors.end(), name) == kMonitors.end())
                    sv.error(sv.at("monitors"), "unknown monitor '" + name + "' (energy, conservation_temporal, conservation_spatial)");
                else s.monitors.push_back(name);
            }
    }

    if (r.has("source")) {
        const Reader src = r.child("source", {"position", "direction", "amplitude", "peak_frequency", "delay"});
        PointSource ps;
        const auto pos = src.numbers("position", {0.5 * s.grid.length(0), 0.5 * s.grid.length(1)}, 0);
        const auto dir = src.numbers("direction", {1.0, 0.0}, 0);
        if (pos.size() < du || dir.size() < du) src.error(src.at("position"), "needs one entry per dimension");
        else
            for (std::size_t a = 0; a < du; ++a) ps.position[a] = pos[a], ps.direction[a] = dir[a];
        ps.amplitude = src.number("amplitude", 1.0);
        ps.peak_frequency = src.number("peak_frequency", 1.0);
        ps.delay = src.number("delay", 1.5 / ps.peak_frequency);
        if (!(ps.peak_frequency > 0.0)) src.error(src.at("peak_frequency"), "must be positive");
        s.source = ps;
    }

    const Reader in = r.child("initial", {"u", "udot", "random", "seed", "amplitude"});
    s.initial.u = in.expressions("u", du);
    s.initial.udot = in.expressions("udot", du);
    s.initial.random = in.boolean("random", false);
    s.initial.seed = static_cast<unsigned>(in.integer("seed", 1));
    s.initial.amplitude = in.number("amplitude", 1.0);
    if (s.initial.random && (!s.initial.u.empty() || !s.initial.udot.empty()))
        in.error(in.at("random"), "random initial data excludes u/udot expressions");
    if (!s.initial.random && s.initial.u.empty() && !s.source) {
        s.initial.u.assign(du, "0");
        s.initial.u[0] = "sin(x)";
    }
    if (!s.initial.random && s.initial.u.empty()) s.initial.u.assign(du, "0");
    if (!s.initial.random && s.initial.udot.empty()) s.initial.udot.assign(du, "0");
    return s;
}

HomogenizeConfig read_homogenize(const Reader& r) {
    HomogenizeConfig h;
    const Reader l = r.child("laminate", {"cell_length", "phases", "profile", "comparison"});
    const bool custom = l.has("phases");
    if (!custom) {
        h.laminate = LaminateSpec::layered({{1, 1}, {2, 3}, {4, 2}}, {0.3, 0.3, 0.4});
        if (l.has("profile")) l.error(l.at("profile"), "a profile needs explicit phases");
    }
    h.laminate.cell_length = l.number("cell_length", 1.0);
    std::vector<double> fractions;
    if (custom) {
        const json& v = l.raw("phases");
        if (!v.is_array() || v.empty()) l.error(l.at("phases"), "expected a non-empty array of phases");
        else
            for (std::size_t i = 0; i < v.size(); ++i) {
                const Reader ph = l.item(v[i], l.at("phases") + "[" + std::to_string(i) + "]", {"C", "rho", "fraction"});
                if (!ph.ok()) continue;
                h.laminate.phases.push_back({ph.number("C", 1.0), ph.number("rho", 1.0)});
                fractions.push_back(ph.number("fraction", -1.0));
            }
    }
    if (custom && l.has("profile")) {
        const json& v = l.raw("profile");
        if (!v.is_array() || v.empty()) l.error(l.at("profile"), "expected a non-empty array of segments");
        else
            for (std::size_t i = 0; i < v.size(); ++i) {
                const Reader sg = l.item(v[i], l.at("profile") + "[" + std::to_string(i) + "]", {"phase", "fraction"});
                if (!sg.ok()) continue;
                h.laminate.profile.push_back({sg.integer("phase", 0), sg.number("fraction", 0.0)});
            }
        // phase fractions, when given, must match the profile
        for (std::size_t ph = 0; ph < fractions.size(); ++ph) {
            if (fractions[ph] < 0.0) continue;
            double sum = 0.0;
            for (const auto& sg : h.laminate.profile)
                if (sg.phase == static_cast<int>(ph)) sum += sg.fraction;
            if (std::abs(sum - fractions[ph]) > 1e-9)
                l.error(l.at("phases") + "[" + std::to_string(ph) + "].fraction", "disagrees with the profile total " + std::to_string(sum));
        }
    } else if (custom) {
        for (std::size_t ph = 0; ph < fractions.size(); ++ph) {
            if (fractions[ph] < 0.0) l.error(l.at("phases") + "[" + std::to_string(ph) + "]", "fraction is required without a profile");
            h.laminate.profile.push_back({static_cast<int>(ph), fractions[ph]});
        }
    }
    if (l.has("comparison")) {
        const Reader c = l.child("comparison", {"C", "rho"});
        if (c.has("C")) h.laminate.C_bar = c.number("C", 1.0);
        if (c.has("rho")) h.laminate.rho_bar = c.number("rho", 1.0);
    }
    try {
        validate(h.laminate);
    } catch (const HomogenizerError& e) {
        l.error(l.at("phases"), e.what());
    }

    if (r.has("omegas") && r.has("omega")) r.error(r.at("omegas"), "give either omegas or omega, not both");
    if (r.has("omegas")) {
        h.omegas = r.numbers("omegas", {}, 0);
    } else {
        const Reader w = r.child("omega", {"min", "max", "count", "scale"});
        const double lo = w.number("min", 0.01), hi = w.number("max", 1.0);
        const int count = w.integer("count", 50);
        const std::string scale = w.string("scale", "log");
        if (count < 1) w.error(w.at("count"), "must be >= 1");
        if (scale != "log" && scale != "linear") w.error(w.at("scale"), "must be 'log' or 'linear'");
        if (!(lo >= 0.0) || !(hi >= lo) || (scale == "log" && !(lo > 0.0))) w.error(w.at("min"), "need 0 <= min <= max (min > 0 on a log scale)");
        else
            for (int i = 0; i < count; ++i) {
                const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
                h.omegas.push_back(scale == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
            }
    }
    for (double w : h.omegas)
        if (!(w >= 0.0) || !std::isfinite(w)) r.error(r.at("omegas"), "frequencies must be finite and >= 0");
    h.q = r.number("q", 0.0);
    h.n_harmonics = r.integer("n_harmonics", 32);
    if (h.n_harmonics < 8) r.error(r.at("n_harmonics"), "must be >= 8");
    h.dispersion = r.boolean("dispersion", true);
    return h;
}

VerifyConfig read_verify(const Reader& r) {
    VerifyConfig v;
    if (r.has("suites")) {
        const json& s = r.raw("suites");
        if (!s.is_array()) r.error(r.at("suites"), "expected an array of suite names");
        else
            for (const auto& e : s) {
                const std::string name = e.is_string() ? e.get<std::string>() : "";
                if (std::find(kVerifySuites.begin(), kVerifySuites.end(), name) == kVerifySuites.end())
                    r.error(r.at("suites"), "unknown suite '" + name + "'");
                else v.suites.push_back(name);
            }
    }
    if (r.has("tolerances")) {
        const json& t = r.raw("tolerances");
        if (!t.is_object()) r.error(r.at("tolerances"), "expected an object of check name -> tolerance");
        else
            for (const auto& [k, val] : t.items()) {
                if (!val.is_number() || !(val.get<double>() > 0.0))
                    r.error(r.at("tolerances") + "." + k, "expected a positive number");
                else v.tolerances[k] = val.get<double>();
            }
    }
    v.seed = static_cast<unsigned>(r.integer("seed", 1));
    return v;
}

json scalar_json(const ScalarInput& s) { return s.is_expr() ? json(s.expr) : json(s.value); }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : InputError("invalid config:\n" + join(errors)), errors_(std::move(errors)) {}

std::string_view to_string(RunMode m) {
    switch (m) {
    case RunMode::simulate: return "simulate";
    case RunMode::homogenize: return "homogenize";
    case RunMode::verify: return "verify";
    }
    return "?";
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("syntax: ") + e.what()});
    }
    std::vector<std::string> errs;
    const Reader top(j, "", errs, {"simulate", "homogenize", "verify", "output"});
    RunConfig c;
    c.base_dir = base_dir;
    int modes = 0;
    for (const char* m : {"simulate", "homogenize", "verify"}) modes += top.has(m);
    if (top.ok() && modes != 1)
        errs.push_back("config: exactly one of 'simulate', 'homogenize', 'verify' is required (found " +
                       std::to_string(modes) + ")");
    if (top.has("simulate")) {
        c.mode = RunMode::simulate;
        c.simulate = read_simulate(top.child(
            "simulate", {"grid", "material", "prestate", "variant", "solver", "source", "initial"}));
    } else if (top.has("homogenize")) {
        c.mode = RunMode::homogenize;
        c.homogenize = read_homogenize(
            top.child("homogenize", {"laminate", "omega", "omegas", "q", "n_harmonics", "dispersion"}));
    } else if (top.has("verify")) {
        c.mode = RunMode::verify;
        c.verify = read_verify(top.child("verify", {"suites", "tolerances", "seed"}));
    }
    const Reader out = top.child("output", {"dir", "snapshots"});
    c.output.dir = out.string("dir", "out");
    c.output.snapshots = out.boolean("snapshots", true);
    if (!errs.empty()) throw ConfigError(errs);
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path.string() + ": cannot read"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

std::string canonical_config(const RunConfig& c) {
    json j;
    if (c.mode == RunMode::simulate) {
        const SimulateConfig& s = c.simulate;
        const GridSpec& g = s.grid;
        json grid = {{"dim", g.dim}, {"dt", g.dt}, {"steps", g.n_steps}, {"bc", std::string(to_string(g.bc))}};
        grid["n"] = g.dim == 2 ? json::array({g.n[0], g.n[1]}) : json::array({g.n[0]});
        grid["dx"] = g.dim == 2 ? json::array({g.dx[0], g.dx[1]}) : json::array({g.dx[0]});
        json mat = {{"rho", scalar_json(s.material.rho)}};
        if (g.dim == 1) mat["C"] = scalar_json(s.material.C);
        else mat["lambda"] = scalar_json(s.material.lambda), mat["mu"] = scalar_json(s.material.mu);
        if (!s.material.file.empty()) mat["file"] = s.material.file;
        json pre = json::object();
        if (!s.prestate.u0.empty()) pre["u0"] = s.prestate.u0;
        if (!s.prestate.v0.empty()) pre["v0"] = s.prestate.v0;
        if (!s.prestate.sigma0.empty()) pre["sigma0"] = s.prestate.sigma0;
        if (!s.prestate.u0_file.empty()) pre["u0_file"] = s.prestate.u0_file;
        if (!s.prestate.sigma0_file.empty()) pre["sigma0_file"] = s.prestate.sigma0_file;
        json init = s.initial.random ? json{{"random", true}, {"seed", s.initial.seed}, {"amplitude", s.initial.amplitude}}
                                     : json{{"u", s.initial.u}, {"udot", s.initial.udot}};
        j["simulate"] = {{"grid", grid},
                         {"material", mat},
                         {"prestate", pre},
                         {"variant", std::string(to_string(s.variant))},
                         {"solver",
                          {{"cfl", s.cfl}, {"record_every", s.record_every}, {"growth_limit", s.growth_limit},
                           {"monitors", s.monitors}}},
                         {"initial", init}};
        if (s.source) {
            const PointSource& p = *s.source;
            std::vector<double> pos{p.position[0]}, dir{p.direction[0]};
            if (g.dim == 2) pos.push_back(p.position[1]), dir.push_back(p.direction[1]);
            j["simulate"]["source"] = {{"position", pos},
                                       {"direction", dir},
                                       {"amplitude", p.amplitude},
                                       {"peak_frequency", p.peak_frequency},
                                       {"delay", p.delay}};
        }
    } else if (c.mode == RunMode::homogenize) {
        const HomogenizeConfig& h = c.homogenize;
        json phases = json::array(), profile = json::array();
        for (const auto& p : h.laminate.phases) phases.push_back({{"C", p.C}, {"rho", p.rho}});
        for (const auto& s : h.laminate.profile) profile.push_back({{"phase", s.phase}, {"fraction", s.fraction}});
        json lam = {{"cell_length", h.laminate.cell_length}, {"phases", phases}, {"profile", profile}};
        if (h.laminate.C_bar || h.laminate.rho_bar) {
            lam["comparison"] = json::object();
            if (h.laminate.C_bar) lam["comparison"]["C"] = *h.laminate.C_bar;
            if (h.laminate.rho_bar) lam["comparison"]["rho"] = *h.laminate.rho_bar;
        }
        j["homogenize"] = {{"laminate", lam},
                           {"omegas", h.omegas},
                           {"q", h.q},
                           {"n_harmonics", h.n_harmonics},
                           {"dispersion", h.dispersion}};
    } else {
        json tol = json::object();
        for (const auto& [k, v] : c.verify.tolerances) tol[k] = v;
        j["verify"] = {{"suites", c.verify.suites.empty() ? kVerifySuites : c.verify.suites},
                       {"tolerances", tol},
                       {"seed", c.verify.seed}};
    }
    j["output"] = {{"dir", c.output.dir}, {"snapshots", c.output.snapshots}};
    return j.dump(2) + "\n";
}

}  // namespace gel
