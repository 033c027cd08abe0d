#pragma once

#include "axiwill/scheme_common.hpp"

namespace axiwill::kappa_scheme {

SchemeState init_state(const GeneratingCurve& curve, const ModelParams& params);

// Explicit right-hand side of the position equation for every nodal
// direction (before restriction to admissible directions), including the
// explicit tangential term moved to the right.
std::vector<Vec2> explicit_force(const SchemeState& state, const CurveGeometry& geometry, const ModelParams& params);

BlockSystem assemble_step(const SchemeState& state, const ModelParams& params, double dt);

// Left-hand side of the side constraint, tested with every nodal basis
// direction: (kappa nu, phi_k e_i |X_rho|)^h + (X_rho, (phi_k e_i)_rho |X_rho|^{-1}).
std::vector<Vec2> side_constraint_action(const GeneratingCurve& current, const CurveGeometry& geometry,
                                         const std::vector<double>& kappa, const GeneratingCurve& next);

}  // namespace axiwill::kappa_scheme
