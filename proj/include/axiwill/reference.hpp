#pragma once

#include "axiwill/curve.hpp"

#include <map>
#include <string>
#include <vector>

namespace axiwill {

// Radius of a sphere evolving under generalized Willmore flow,
// R' = -(kbar / R)(2 / R + kbar), R(0) = R0.
struct SphereReference {
    double kbar = 0.0;
    double R0 = 1.0;
};

// Root of the closed-form implicit relation, accurate to 1e-12.
double sphere_radius(const SphereReference& ref, double t);

struct Snapshot {
    double time = 0.0;
    GeneratingCurve curve;
};

struct ErrorNorms {
    double linf = 0.0;     // max over m >= 1 and nodes of ||X| - R(t_m)|
    double linf_l2 = 0.0;  // max over m >= 1 of the lumped L2 norm of |X| - R(t_m)
};

// The first snapshot is the initial curve and is excluded from both maxima.
ErrorNorms error_norms(const std::vector<Snapshot>& history, const SphereReference& ref);

// Experimental order of convergence between two refinement levels.
double eoc(double error_coarse, double error_fine, double h_coarse, double h_fine);

// Maximal element length.
double max_edge_length(const GeneratingCurve& curve);

using PresetParams = std::map<std::string, double>;

struct PresetInfo {
    std::string id;
    std::string description;
    PresetParams defaults;
};

const std::vector<PresetInfo>& preset_catalog();

// Builds the generating curve of a named preset; unspecified parameters take
// the catalog defaults, unknown keys or invalid values raise InvalidPresetParams.
GeneratingCurve make_preset(const std::string& id, const PresetParams& params = {});

}  // namespace axiwill
