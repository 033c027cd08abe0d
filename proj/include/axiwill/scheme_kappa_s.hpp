#pragma once

#include "axiwill/scheme_common.hpp"

namespace axiwill::kappa_s_scheme {

// `exact` selects true integration for the switchable inner products and makes
// kappaS a genuine unknown at axis nodes.
SchemeState init_state(const GeneratingCurve& curve, const ModelParams& params, bool exact);

std::vector<Vec2> explicit_force(const SchemeState& state, const CurveGeometry& geometry, const ModelParams& params,
                                 const QuadratureRule& rule);

// `rule` overrides the quadrature of the switchable inner products.
BlockSystem assemble_step(const SchemeState& state, const ModelParams& params, double dt, bool exact,
                          const QuadratureRule* rule = nullptr);

// (x1 kappaS nu, phi |X_rho|)^(h) + (e1, phi |X_rho|) + (x1 X_rho, phi_rho |X_rho|^{-1}) per nodal direction.
std::vector<Vec2> side_constraint_action(const GeneratingCurve& current, const CurveGeometry& geometry,
                                         const std::vector<double>& kappaS, const GeneratingCurve& next,
                                         const QuadratureRule& rule);

}  // namespace axiwill::kappa_s_scheme
