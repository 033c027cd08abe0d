#include "axiwill/driver.hpp"

#include "axiwill/functionals.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace axiwill {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& why) { fail(ErrorKind::InvalidConfig, why); }

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) bad_config(where + " must be an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) bad_config("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) bad_config(where + "." + key + " must be a number");
    return v.get<double>();
}

int integer(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) bad_config(where + "." + key + " must be an integer");
    return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_string()) bad_config(where + "." + key + " must be a string");
    return v.get<std::string>();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string fmt_opt(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_integral_v<T>)
        return std::to_string(*v);
    else
        return fmt(*v);
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad_config("cannot write " + path.string());
    out << content;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["name"] = c.name;
    json curve;
    if (!c.curve.preset.empty()) {
        curve["preset"] = c.curve.preset;
        curve["params"] = c.curve.preset_params;
    } else {
        curve["file"] = c.curve.file;
        curve["topology"] = c.curve.topology == Topology::Periodic ? "closed" : "open";
    }
    if (c.curve.ends) curve["ends"] = {to_string((*c.curve.ends)[0]), to_string((*c.curve.ends)[1])};
    j["curve"] = curve;
    j["scheme"] = to_string(c.scheme);
    const ModelParams& p = c.params;
    j["params"] = {{"alpha", p.alpha},   {"kbar", p.kbar},     {"lambda", p.lambda}, {"beta", p.beta},
                   {"M0", p.M0},         {"alphaG", p.alphaG}, {"sigma", p.sigma},
                   {"clamp_angles", {p.clamp_angles[0], p.clamp_angles[1]}}};
    json time = json::object();
    if (c.dt) time["dt"] = *c.dt;
    if (c.dt_h2_factor) time["dt_h2_factor"] = *c.dt_h2_factor;
    if (c.final_time) time["T"] = *c.final_time;
    if (c.steps) time["steps"] = *c.steps;
    if (!c.dt_list.empty()) time["dt_list"] = c.dt_list;
    j["time"] = time;
    j["conservation"] = {{"mode", to_string(c.conservation)},
                         {"newton",
                          {{"tolerance", c.newton.tolerance},
                           {"max_iterations", c.newton.max_iterations},
                           {"initial_lambda_A", c.newton.initial_lambda_A},
                           {"initial_lambda_V", c.newton.initial_lambda_V},
                           {"jacobian_rcond_min", c.newton.jacobian_rcond_min}}}};
    j["output"] = {{"snapshot_every", c.snapshot_every}, {"ktheta", c.ktheta}};
    if (c.reference_sphere) j["reference_sphere"] = {{"kbar", c.reference_sphere->kbar}, {"R0", c.reference_sphere->R0}};
    j["guards"] = {{"min_element_ratio", c.min_element_ratio}};
    return j;
}

}  // namespace

void RunConfig::check() const {
    params.check();
    const bool has_preset = !curve.preset.empty(), has_file = !curve.file.empty();
    if (has_preset == has_file) bad_config("curve needs exactly one of 'preset' and 'file'");
    if (!dt_list.empty()) {
        if (dt || dt_h2_factor || final_time || steps) bad_config("dt_list excludes dt, dt_h2_factor, T and steps");
        for (double d : dt_list)
            if (!(d > 0.0) || !std::isfinite(d)) bad_config("time steps must be positive");
    } else {
        if (bool(dt) == bool(dt_h2_factor)) bad_config("time needs exactly one of 'dt' and 'dt_h2_factor'");
        if (dt && !(*dt > 0.0 && std::isfinite(*dt))) bad_config("dt must be positive");
        if (dt_h2_factor && !(*dt_h2_factor > 0.0 && std::isfinite(*dt_h2_factor)))
            bad_config("dt_h2_factor must be positive");
        if (bool(final_time) == bool(steps)) bad_config("time needs exactly one of 'T' and 'steps'");
        if (final_time && !(*final_time >= 0.0 && std::isfinite(*final_time))) bad_config("T must be non-negative");
        if (steps && *steps < 0) bad_config("steps must be non-negative");
    }
    if (conservation != ConservationMode::None && scheme != SchemeKind::Kappa)
        bad_config("conserved flows are available for the kappa scheme only");
    if (snapshot_every < 0) bad_config("snapshot_every must be non-negative");
    if (ktheta != 0 && ktheta < 3) bad_config("ktheta must be 0 or at least 3");
    if (!(min_element_ratio >= 0.0 && min_element_ratio < 1.0)) bad_config("min_element_ratio must lie in [0, 1)");
    if (reference_sphere && !(reference_sphere->R0 > 0.0)) bad_config("reference_sphere.R0 must be positive");
}

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        bad_config(std::string("malformed JSON: ") + e.what());
    }
    try {
        require_keys(j, "config", {"name", "curve", "scheme", "params", "time", "conservation", "output",
                                   "reference_sphere", "guards"});
        RunConfig c;
        if (j.contains("name")) c.name = text(j, "name", "config");

        if (!j.contains("curve")) bad_config("config needs 'curve'");
        const json& cj = j["curve"];
        require_keys(cj, "curve", {"preset", "params", "file", "topology", "ends"});
        if (cj.contains("preset")) c.curve.preset = text(cj, "preset", "curve");
        if (cj.contains("params")) {
            if (!cj["params"].is_object()) bad_config("curve.params must be an object");
            for (const auto& [key, value] : cj["params"].items()) {
                if (!value.is_number()) bad_config("curve.params." + key + " must be a number");
                c.curve.preset_params[key] = value.get<double>();
            }
        }
        if (cj.contains("file")) c.curve.file = text(cj, "file", "curve");
        if (cj.contains("topology")) {
            const std::string t = text(cj, "topology", "curve");
            if (t == "closed")
                c.curve.topology = Topology::Periodic;
            else if (t == "open")
                c.curve.topology = Topology::Interval;
            else
                bad_config("curve.topology must be 'closed' or 'open'");
        }
        if (cj.contains("ends")) {
            const json& e = cj["ends"];
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                bad_config("curve.ends must be a pair of boundary class names");
            c.curve.ends = std::array<BoundaryKind, 2>{boundary_kind_from_string(e[0].get<std::string>()),
                                                       boundary_kind_from_string(e[1].get<std::string>())};
        }
        if (!c.curve.preset.empty() && cj.contains("topology")) bad_config("curve.topology applies to files only");
        if (c.curve.preset.empty() && cj.contains("params")) bad_config("curve.params applies to presets only");

        if (j.contains("scheme")) c.scheme = scheme_kind_from_string(text(j, "scheme", "config"));

        if (j.contains("params")) {
            const json& pj = j["params"];
            require_keys(pj, "params", {"alpha", "kbar", "lambda", "beta", "M0", "alphaG", "sigma", "clamp_angles"});
            ModelParams& p = c.params;
            if (pj.contains("alpha")) p.alpha = number(pj, "alpha", "params");
            if (pj.contains("kbar")) p.kbar = number(pj, "kbar", "params");
            if (pj.contains("lambda")) p.lambda = number(pj, "lambda", "params");
            if (pj.contains("beta")) p.beta = number(pj, "beta", "params");
            if (pj.contains("M0")) p.M0 = number(pj, "M0", "params");
            if (pj.contains("alphaG")) p.alphaG = number(pj, "alphaG", "params");
            if (pj.contains("sigma")) p.sigma = number(pj, "sigma", "params");
            if (pj.contains("clamp_angles")) {
                const json& a = pj["clamp_angles"];
                if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                    bad_config("params.clamp_angles must be a pair of numbers");
                p.clamp_angles = {a[0].get<double>(), a[1].get<double>()};
            }
        }

        if (!j.contains("time")) bad_config("config needs 'time'");
        const json& tj = j["time"];
        require_keys(tj, "time", {"dt", "dt_h2_factor", "T", "steps", "dt_list"});
        if (tj.contains("dt")) c.dt = number(tj, "dt", "time");
        if (tj.contains("dt_h2_factor")) c.dt_h2_factor = number(tj, "dt_h2_factor", "time");
        if (tj.contains("T")) c.final_time = number(tj, "T", "time");
        if (tj.contains("steps")) c.steps = integer(tj, "steps", "time");
        if (tj.contains("dt_list")) {
            if (!tj["dt_list"].is_array() || tj["dt_list"].empty()) bad_config("time.dt_list must be a non-empty array");
            for (const auto& v : tj["dt_list"]) {
                if (!v.is_number()) bad_config("time.dt_list entries must be numbers");
                c.dt_list.push_back(v.get<double>());
            }
        }

        if (j.contains("conservation")) {
            const json& kj = j["conservation"];
            require_keys(kj, "conservation", {"mode", "newton"});
            if (kj.contains("mode")) c.conservation = conservation_mode_from_string(text(kj, "mode", "conservation"));
            if (kj.contains("newton")) {
                const json& nj = kj["newton"];
                require_keys(nj, "conservation.newton", {"tolerance", "max_iterations", "initial_lambda_A",
                                                         "initial_lambda_V", "jacobian_rcond_min"});
                const std::string w = "conservation.newton";
                if (nj.contains("tolerance")) c.newton.tolerance = number(nj, "tolerance", w);
                if (nj.contains("max_iterations")) c.newton.max_iterations = integer(nj, "max_iterations", w);
                if (nj.contains("initial_lambda_A")) c.newton.initial_lambda_A = number(nj, "initial_lambda_A", w);
                if (nj.contains("initial_lambda_V")) c.newton.initial_lambda_V = number(nj, "initial_lambda_V", w);
                if (nj.contains("jacobian_rcond_min")) c.newton.jacobian_rcond_min = number(nj, "jacobian_rcond_min", w);
            }
        }

        if (j.contains("output")) {
            const json& oj = j["output"];
            require_keys(oj, "output", {"snapshot_every", "ktheta"});
            if (oj.contains("snapshot_every")) c.snapshot_every = integer(oj, "snapshot_every", "output");
            if (oj.contains("ktheta")) c.ktheta = integer(oj, "ktheta", "output");
        }
        if (j.contains("reference_sphere")) {
            const json& rj = j["reference_sphere"];
            require_keys(rj, "reference_sphere", {"kbar", "R0"});
            SphereReference ref;
            if (rj.contains("kbar")) ref.kbar = number(rj, "kbar", "reference_sphere");
            if (rj.contains("R0")) ref.R0 = number(rj, "R0", "reference_sphere");
            c.reference_sphere = ref;
        }
        if (j.contains("guards")) {
            const json& gj = j["guards"];
            require_keys(gj, "guards", {"min_element_ratio"});
            if (gj.contains("min_element_ratio")) c.min_element_ratio = number(gj, "min_element_ratio", "guards");
        }
        c.check();
        return c;
    } catch (const json::exception& e) {
        bad_config(std::string("invalid config: ") + e.what());
    }
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_config("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c = parse_run_config(ss.str());
    // Curve files are resolved relative to the config.
    if (!c.curve.file.empty() && fs::path(c.curve.file).is_relative())
        c.curve.file = (path.parent_path() / c.curve.file).lexically_normal().string();
    return c;
}

GeneratingCurve build_initial_curve(const RunConfig& config) {
    GeneratingCurve curve;
    if (!config.curve.preset.empty()) {
        curve = make_preset(config.curve.preset, config.curve.preset_params);
        if (config.curve.ends) {
            if (curve.periodic()) bad_config("boundary classes do not apply to a closed curve");
            curve.ends = *config.curve.ends;
        }
    } else {
        auto nodes = read_snapshot_csv(config.curve.file);
        if (config.curve.topology == Topology::Periodic) {
            if (config.curve.ends) bad_config("boundary classes do not apply to a closed curve");
            curve = GeneratingCurve::closed(std::move(nodes));
        } else {
            if (!config.curve.ends) bad_config("open curve files need 'ends'");
            curve = GeneratingCurve::open(std::move(nodes), (*config.curve.ends)[0], (*config.curve.ends)[1]);
        }
    }
    if (config.conservation != ConservationMode::None && !curve.periodic())
        for (BoundaryKind k : curve.ends)
            if (has_conormal_unknown(k)) bad_config("conserved flows need endpoints without a conormal unknown");
    return curve;
}

std::vector<double> time_steps(const RunConfig& config, const GeneratingCurve& initial) {
    if (!config.dt_list.empty()) return config.dt_list;
    double dt = config.dt ? *config.dt : *config.dt_h2_factor * std::pow(max_edge_length(initial), 2);
    int M = 0;
    if (config.steps) {
        M = *config.steps;
    } else {
        const double T = *config.final_time;
        M = static_cast<int>(std::ceil(T / dt - 1e-9));
        if (M > 0) dt = T / M;  // uniform steps landing exactly on T
    }
    return std::vector<double>(M, dt);
}

DiagnosticsRow diagnose(const SchemeState& state, const RunConfig& config, int step) {
    const GeneratingCurve& c = state.curve;
    const CurveGeometry geom = build_geometry(c);
    DiagnosticsRow r;
    r.step = step;
    r.time = state.time;
    r.energy = discrete_energy(config.scheme, c, geom, state.kappa, c, state.conormal, config.params);
    r.ratio = mesh_ratio(c);
    r.area = surface_area(c);
    if (c.encloses_volume()) r.volume = enclosed_volume(c);
    if (!c.has_axis_endpoint()) {
        bool touches = false;
        for (const Vec2& q : c.nodes) touches = touches || !(q.x() > 0.0);
        if (!touches) r.hyp_length = hyperbolic_length(c);
    }
    if (c.periodic()) r.turning = turning_number(c).value;
    r.ade = ade_term(c, geom, state.kappa, config.scheme, config.params.M0);
    return r;
}

namespace {

std::string diagnostics_header() {
    return "step,time,energy,ratio,area,volume,hyp_length,turning,ade,lambda_A,lambda_V,newton_iters\n";
}

std::string diagnostics_line(const DiagnosticsRow& r) {
    std::string s = std::to_string(r.step);
    for (const std::string& f :
         {fmt(r.time), fmt(r.energy), fmt(r.ratio), fmt(r.area), fmt_opt(r.volume), fmt_opt(r.hyp_length),
          fmt_opt(r.turning), fmt(r.ade), fmt_opt(r.lambda_A), fmt_opt(r.lambda_V), fmt_opt(r.newton_iters)})
        s += "," + f;
    return s + "\n";
}

std::string snapshot_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "step_%08d.csv", step);
    return buf;
}

void check_element_ratio(const GeneratingCurve& c, double min_ratio) {
    if (min_ratio <= 0.0) return;
    const auto frames = build_element_frames(c);
    double lo = frames.front().length, sum = 0.0;
    int at = 0;
    for (size_t e = 0; e < frames.size(); ++e) {
        sum += frames[e].length;
        if (frames[e].length < lo) {
            lo = frames[e].length;
            at = static_cast<int>(e);
        }
    }
    const double mean = sum / frames.size();
    if (lo < min_ratio * mean) {
        std::ostringstream os;
        os << "vertices coalesced: element " << at << " has length " << lo << " below " << min_ratio
           << " times the mean element length " << mean;
        fail(ErrorKind::DegenerateElement, os.str());
    }
}

double axis_offset(const GeneratingCurve& c) {
    double d = 0.0;
    if (c.periodic()) return d;
    const int n = c.node_count();
    if (c.ends[0] == BoundaryKind::Axis) d = std::max(d, std::abs(c.nodes[1].y() - c.nodes[0].y()));
    if (c.ends[1] == BoundaryKind::Axis) d = std::max(d, std::abs(c.nodes[n - 2].y() - c.nodes[n - 1].y()));
    return d;
}

}  // namespace

RunResult run(const RunConfig& config, const std::optional<fs::path>& out_dir) {
    config.check();
    const GeneratingCurve initial = build_initial_curve(config);
    const std::vector<double> dts = time_steps(config, initial);
    const int M = static_cast<int>(dts.size());
    const bool uniform = config.dt_list.empty();

    std::ofstream diag;
    std::ofstream snap_index;
    if (out_dir) {
        fs::create_directories(*out_dir / "snapshots");
        write_text(*out_dir / "config.json", config_to_json(config).dump(2) + "\n");
        diag.open(*out_dir / "diagnostics.csv", std::ios::binary);
        snap_index.open(*out_dir / "snapshots" / "index.csv", std::ios::binary);
        if (!diag || !snap_index) bad_config("cannot write into " + out_dir->string());
        diag << diagnostics_header();
        snap_index << "step,time,file\n";
    }

    RunResult result;
    const double A0 = surface_area(initial);
    const double V0 = initial.encloses_volume() ? enclosed_volume(initial) : 0.0;
    std::optional<ErrorNorms> errs;
    if (config.reference_sphere) errs = ErrorNorms{};

    auto record_snapshot = [&](const SchemeState& s, int step) {
        result.snapshots.push_back({s.time, s.curve});
        if (out_dir) {
            write_snapshot_csv(s.curve, *out_dir / "snapshots" / snapshot_name(step));
            snap_index << step << "," << fmt(s.time) << "," << snapshot_name(step) << "\n";
        }
    };
    auto emit_row = [&](const DiagnosticsRow& r) {
        result.rows.push_back(r);
        if (out_dir) diag << diagnostics_line(r);
    };

    SchemeState state;
    int step = 0;
    try {
        state = initial_state(initial, config.params, config.scheme);
        DiagnosticsRow r0 = diagnose(state, config, 0);
        if (config.conservation != ConservationMode::None) {
            r0.lambda_A = config.newton.initial_lambda_A;
            r0.lambda_V = config.newton.initial_lambda_V;
            r0.newton_iters = 0;
        }
        emit_row(r0);
        record_snapshot(state, 0);

        double t_sum = 0.0;
        for (step = 1; step <= M; ++step) {
            const double dt = dts[step - 1];
            t_sum += dt;
            SchemeState next;
            std::optional<double> lamA, lamV;
            std::optional<int> iters;
            if (config.conservation == ConservationMode::None) {
                StepReport rep;
                next = advance(state, config.params, dt, config.scheme, &rep);
                result.max_side_residual = std::max(result.max_side_residual, rep.side_residual);
            } else {
                ConservedStepResult cs =
                    conserved_step(state, config.params, dt, config.conservation, config.newton, A0, V0);
                next = std::move(cs.state);
                lamA = cs.lambda_A;
                lamV = cs.lambda_V;
                iters = cs.iterations;
                result.max_side_residual = std::max(result.max_side_residual, cs.report.side_residual);
                result.max_newton_iterations = std::max(result.max_newton_iterations, cs.iterations);
            }
            next.time = uniform ? step * dts.front() : t_sum;
            result.max_axis_offset = std::max(result.max_axis_offset, axis_offset(next.curve));
            check_element_ratio(next.curve, config.min_element_ratio);
            DiagnosticsRow r = diagnose(next, config, step);
            r.lambda_A = lamA;
            r.lambda_V = lamV;
            r.newton_iters = iters;
            if (errs) {
                const ErrorNorms e = error_norms({Snapshot{state.time, state.curve}, Snapshot{next.time, next.curve}},
                                                 *config.reference_sphere);
                errs->linf = std::max(errs->linf, e.linf);
                errs->linf_l2 = std::max(errs->linf_l2, e.linf_l2);
            }
            state = std::move(next);
            emit_row(r);
            if ((config.snapshot_every > 0 && step % config.snapshot_every == 0) || step == M)
                record_snapshot(state, step);
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidConfig || e.kind() == ErrorKind::InvalidPresetParams) throw;
        result.ok = false;
        result.failure = RunFailure{step, state.time, e.kind(), e.what()};
    }
    result.final_state = state;
    result.sphere_errors = errs;

    if (out_dir) {
        diag.close();
        snap_index.close();
        json summary;
        summary["name"] = config.name;
        summary["status"] = result.ok ? "ok" : "failed";
        summary["scheme"] = to_string(config.scheme);
        summary["steps_requested"] = M;
        summary["steps_completed"] = result.rows.empty() ? 0 : result.rows.back().step;
        if (!result.rows.empty()) {
            const DiagnosticsRow& last = result.rows.back();
            summary["final_time"] = last.time;
            summary["final_energy"] = last.energy;
            summary["final_ratio"] = last.ratio;
            summary["final_area"] = last.area;
            if (last.volume) summary["final_volume"] = *last.volume;
            if (last.turning) summary["turning_number"] = *last.turning;
        }
        summary["max_side_residual"] = result.max_side_residual;
        summary["max_axis_offset"] = result.max_axis_offset;
        if (config.conservation != ConservationMode::None) summary["max_newton_iterations"] = result.max_newton_iterations;
        if (errs) summary["sphere_errors"] = {{"linf", errs->linf}, {"linf_l2", errs->linf_l2}};
        if (!result.rows.empty() && state.curve.periodic()) {
            const CircleFit fit = fit_circle(state.curve);
            summary["circle_fit"] = {{"center_x1", fit.center.x()},
                                     {"center_x2", fit.center.y()},
                                     {"radius", fit.radius},
                                     {"center_over_radius", fit.center.x() / fit.radius}};
        }
        write_text(*out_dir / "summary.json", summary.dump(2) + "\n");
        if (result.failure) {
            const RunFailure& f = *result.failure;
            json fj = {{"step", f.step},
                       {"kind", to_string(f.kind)},
                       {"message", f.message},
                       {"last_valid_step", f.step - 1},
                       {"last_valid_time", f.time},
                       {"state_file", "failure_state.csv"}};
            write_text(*out_dir / "failure.json", fj.dump(2) + "\n");
            if (!state.curve.nodes.empty()) write_snapshot_csv(state.curve, *out_dir / "failure_state.csv");
        } else if (config.ktheta > 0) {
            write_obj(export_revolved(state.curve, config.ktheta), *out_dir / "mesh.obj");
        }
    }
    return result;
}

std::vector<Vec2> read_snapshot_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) bad_config("cannot read snapshot " + path.string());
    std::string line;
    if (!std::getline(in, line)) bad_config("empty snapshot " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "index,x1,x2") bad_config("snapshot " + path.string() + " lacks the header index,x1,x2");
    std::vector<Vec2> nodes;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            bad_config("malformed snapshot row '" + line + "'");
        try {
            size_t used = 0;
            const long idx = std::stol(a, &used);
            if (used != a.size() || idx != static_cast<long>(nodes.size()))
                bad_config("snapshot indices must run 0, 1, 2, ...");
            const double x = std::stod(b), y = std::stod(c);
            if (!std::isfinite(x) || !std::isfinite(y)) bad_config("non-finite snapshot coordinate");
            nodes.emplace_back(x, y);
        } catch (const std::logic_error&) {
            bad_config("malformed snapshot row '" + line + "'");
        }
    }
    return nodes;
}

void write_snapshot_csv(const GeneratingCurve& curve, const fs::path& path) {
    std::string s = "index,x1,x2\n";
    for (int k = 0; k < curve.node_count(); ++k)
        s += std::to_string(k) + "," + fmt(curve.nodes[k].x()) + "," + fmt(curve.nodes[k].y()) + "\n";
    write_text(path, s);
}

CircleFit fit_circle(const GeneratingCurve& curve) {
    const int n = curve.node_count();
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (int k = 0; k < n; ++k) {
        const Vec2& q = curve.nodes[k];
        A(k, 0) = q.x();
        A(k, 1) = q.y();
        A(k, 2) = 1.0;
        b[k] = q.squaredNorm();
    }
    const Eigen::Vector3d s = A.colPivHouseholderQr().solve(b);
    CircleFit fit;
    fit.center = Vec2(0.5 * s[0], 0.5 * s[1]);
    fit.radius = std::sqrt(s[2] + fit.center.squaredNorm());
    return fit;
}

RevolvedMesh export_revolved(const GeneratingCurve& curve, int ktheta) {
    if (ktheta < 3) fail(ErrorKind::InvalidConfig, "export needs at least 3 azimuthal segments");
    RevolvedMesh mesh;
    const int n = curve.node_count();
    // First vertex index of each node: an apex for axis nodes, a ring otherwise.
    std::vector<int> first(n);
    std::vector<bool> apex(n);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int k = 0; k < n; ++k) {
        const Vec2& q = curve.nodes[k];
        first[k] = static_cast<int>(mesh.vertices.size());
        apex[k] = curve.is_axis_node(k);
        if (apex[k]) {
            mesh.vertices.push_back({0.0, q.y(), 0.0});
            continue;
        }
        for (int i = 0; i < ktheta; ++i) {
            const double th = two_pi * i / ktheta;
            mesh.vertices.push_back({q.x() * std::cos(th), q.y(), q.x() * std::sin(th)});
        }
    }
    auto at = [&](int k, int i) { return apex[k] ? first[k] : first[k] + (i % ktheta); };
    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e), b = curve.element_end(e);
        if (apex[a] && apex[b]) continue;
        for (int i = 0; i < ktheta; ++i) {
            // Quad (a_i, a_{i+1}, b_{i+1}, b_i) is positively oriented with respect to nu.
            if (!apex[a]) mesh.triangles.push_back({at(a, i), at(a, i + 1), at(b, i + 1)});
            if (!apex[b]) mesh.triangles.push_back({at(a, i), at(b, i + 1), at(b, i)});
        }
    }
    return mesh;
}

void write_obj(const RevolvedMesh& mesh, const fs::path& path) {
    std::string s;
    s.reserve(mesh.vertices.size() * 60 + mesh.triangles.size() * 24);
    for (const auto& v : mesh.vertices) s += "v " + fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]) + "\n";
    for (const auto& t : mesh.triangles)
        s += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
    write_text(path, s);
}

double mesh_area(const RevolvedMesh& mesh) {
    double area = 0.0;
    for (const auto& t : mesh.triangles) {
        const Eigen::Vector3d p(mesh.vertices[t[0]].data()), q(mesh.vertices[t[1]].data()), r(mesh.vertices[t[2]].data());
        area += 0.5 * (q - p).cross(r - p).norm();
    }
    return area;
}

}  // namespace axiwill
