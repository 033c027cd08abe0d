#pragma once

#include "axiwill/conserved.hpp"
#include "axiwill/errors.hpp"
#include "axiwill/reference.hpp"
#include "axiwill/scheme_common.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace axiwill {

// Initial curve: either a named preset or a snapshot CSV with explicit topology.
struct CurveSource {
    std::string preset;
    PresetParams preset_params;
    std::string file;
    Topology topology = Topology::Periodic;  // used with `file` only
    std::optional<std::array<BoundaryKind, 2>> ends;  // overrides the preset or file ends
};

struct RunConfig {
    std::string name;
    CurveSource curve;
    SchemeKind scheme = SchemeKind::Kappa;
    ModelParams params;

    // Time steps: either a uniform dt (given directly or as a multiple of the
    // squared maximal initial element length) with a step count or a final
    // time, or an explicit list of step sizes.
    std::optional<double> dt;
    std::optional<double> dt_h2_factor;
    std::optional<double> final_time;
    std::optional<int> steps;
    std::vector<double> dt_list;

    ConservationMode conservation = ConservationMode::None;
    NewtonConfig newton;

    int snapshot_every = 0;  // 0: initial and final state only
    int ktheta = 64;         // azimuthal segments of the final mesh; 0 disables it
    std::optional<SphereReference> reference_sphere;
    // Abort with DegenerateElement once min / mean element length drops below this (0 disables).
    double min_element_ratio = 0.0;

    void check() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

GeneratingCurve build_initial_curve(const RunConfig& config);

// Resolved step sizes of a run on the given initial curve.
std::vector<double> time_steps(const RunConfig& config, const GeneratingCurve& initial);

struct DiagnosticsRow {
    int step = 0;
    double time = 0.0;
    double energy = 0.0;
    double ratio = 0.0;
    double area = 0.0;
    std::optional<double> volume;
    std::optional<double> hyp_length;
    std::optional<int> turning;
    double ade = 0.0;
    std::optional<double> lambda_A;
    std::optional<double> lambda_V;
    std::optional<int> newton_iters;
};

DiagnosticsRow diagnose(const SchemeState& state, const RunConfig& config, int step);

struct RunFailure {
    int step = 0;  // index of the step that failed (1-based level being computed)
    double time = 0.0;
    ErrorKind kind = ErrorKind::InvalidConfig;
    std::string message;
};

struct RunResult {
    bool ok = true;
    std::optional<RunFailure> failure;
    SchemeState final_state;  // last valid state
    std::vector<DiagnosticsRow> rows;
    std::vector<Snapshot> snapshots;
    std::optional<ErrorNorms> sphere_errors;
    double max_side_residual = 0.0;
    // Largest |(X(q1) - X(q0)) . e2| over computed steps and axis endpoints.
    double max_axis_offset = 0.0;
    int max_newton_iterations = 0;
};

// Runs a configuration. When `out_dir` is given, writes config.json,
// diagnostics.csv, snapshots/, summary.json, the final mesh.obj and on failure
// failure.json plus failure_state.csv. Scheme errors are reported in the
// result, configuration errors are thrown.
RunResult run(const RunConfig& config, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

std::vector<Vec2> read_snapshot_csv(const std::filesystem::path& path);
void write_snapshot_csv(const GeneratingCurve& curve, const std::filesystem::path& path);

struct CircleFit {
    Vec2 center = Vec2::Zero();
    double radius = 0.0;
};
// Least-squares circle through the nodes.
CircleFit fit_circle(const GeneratingCurve& curve);

struct RevolvedMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> triangles;  // 0-based, outward along nu
};

RevolvedMesh export_revolved(const GeneratingCurve& curve, int ktheta);
void write_obj(const RevolvedMesh& mesh, const std::filesystem::path& path);
double mesh_area(const RevolvedMesh& mesh);

}  // namespace axiwill
