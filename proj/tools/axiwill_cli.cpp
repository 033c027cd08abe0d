#include "axiwill/driver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

namespace {

int report_error(const axiwill::Error& e) {
    const nlohmann::json j = {{"error", axiwill::to_string(e.kind())}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Axisymmetric Willmore-type flows of surfaces of revolution"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "run a configuration and write its outputs");
    run->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->required();

    std::string snapshot_path, obj_path, topology = "open";
    std::vector<std::string> ends;
    int ktheta = 64;
    auto* exp = app.add_subcommand("export", "revolve a curve snapshot into an OBJ mesh");
    exp->add_option("--snapshot", snapshot_path, "snapshot CSV (index,x1,x2)")->required()->check(CLI::ExistingFile);
    exp->add_option("--ktheta", ktheta, "azimuthal segments")->check(CLI::Range(3, 1 << 20));
    exp->add_option("--obj", obj_path, "output OBJ file")->required();
    exp->add_option("--topology", topology, "closed or open")->check(CLI::IsMember({"closed", "open"}));
    exp->add_option("--ends", ends, "boundary classes of an open curve")->expected(2);

    auto* presets = app.add_subcommand("presets", "preset curves");
    presets->require_subcommand(1);
    presets->add_subcommand("list", "list presets with their default parameters");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const axiwill::RunConfig config = axiwill::load_run_config(config_path);
            const axiwill::RunResult result = axiwill::run(config, out_dir);
            if (!result.ok) {
                const auto& f = *result.failure;
                const nlohmann::json j = {{"error", axiwill::to_string(f.kind)}, {"step", f.step}, {"message", f.message}};
                std::cerr << j.dump() << "\n";
                return 2;
            }
            std::printf("completed %d steps, t = %.10g, energy = %.10g\n", result.rows.back().step,
                        result.rows.back().time, result.rows.back().energy);
            return 0;
        }
        if (*exp) {
            auto nodes = axiwill::read_snapshot_csv(snapshot_path);
            axiwill::GeneratingCurve curve;
            if (topology == "closed") {
                curve = axiwill::GeneratingCurve::closed(std::move(nodes));
            } else {
                axiwill::BoundaryKind l = axiwill::BoundaryKind::Free, r = axiwill::BoundaryKind::Free;
                if (ends.size() == 2) {
                    l = axiwill::boundary_kind_from_string(ends[0]);
                    r = axiwill::boundary_kind_from_string(ends[1]);
                } else {
                    // Endpoints exactly on the axis become apex vertices.
                    if (nodes.front().x() == 0.0) l = axiwill::BoundaryKind::Axis;
                    if (nodes.back().x() == 0.0) r = axiwill::BoundaryKind::Axis;
                }
                curve = axiwill::GeneratingCurve::open(std::move(nodes), l, r);
            }
            const auto mesh = axiwill::export_revolved(curve, ktheta);
            axiwill::write_obj(mesh, obj_path);
            std::printf("%zu vertices, %zu triangles\n", mesh.vertices.size(), mesh.triangles.size());
            return 0;
        }
        for (const auto& p : axiwill::preset_catalog()) {
            std::printf("%s: %s\n", p.id.c_str(), p.description.c_str());
            for (const auto& [key, value] : p.defaults) std::printf("    %s = %.10g\n", key.c_str(), value);
        }
        return 0;
    } catch (const axiwill::Error& e) {
        return report_error(e);
    }
}
