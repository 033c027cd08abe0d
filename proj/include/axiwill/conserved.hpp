#pragma once

#include "axiwill/scheme_common.hpp"

#include <string>

namespace axiwill {

enum class ConservationMode { None, Area, Volume, AreaAndVolume };

const char* to_string(ConservationMode mode);
ConservationMode conservation_mode_from_string(const std::string& name);

struct NewtonConfig {
    double tolerance = 1e-10;  // absolute, on each active constraint
    int max_iterations = 20;
    double initial_lambda_A = 0.0;
    double initial_lambda_V = 0.0;
    // Smallest admissible ratio of singular values of the constraint Jacobian.
    double jacobian_rcond_min = 1e-10;
};

struct ConservedStepResult {
    SchemeState state;
    double lambda_A = 0.0;
    double lambda_V = 0.0;
    int iterations = 0;
    StepReport report;
};

// Surface area and/or volume preserving step of the kappa scheme: the target
// values are those of the initial curve. Requires no endpoint with a conormal
// unknown; volume modes require a closed surface.
ConservedStepResult conserved_step(const SchemeState& state, const ModelParams& params, double dt,
                                   ConservationMode mode, const NewtonConfig& cfg, double target_area,
                                   double target_volume);

}  // namespace axiwill
