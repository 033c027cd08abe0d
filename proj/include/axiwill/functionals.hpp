#pragma once

#include "axiwill/curve.hpp"

#include <array>
#include <vector>

namespace axiwill {

struct ModelParams {
    double alpha = 1.0;   // bending rigidity
    double kbar = 0.0;    // spontaneous curvature
    double lambda = 0.0;  // surface tension
    double beta = 0.0;    // area-difference elasticity weight
    double M0 = 0.0;      // area-difference offset
    double alphaG = 0.0;  // Gaussian rigidity
    double sigma = 0.0;   // line energy coefficient
    std::array<double, 2> clamp_angles{0.0, 0.0};  // contact angle per clamped endpoint

    // Prescribed conormal (sin t, cos t) at a clamped endpoint.
    Vec2 clamp_direction(int endpoint) const;
    void check() const;
};

enum class SchemeKind { Kappa, KappaSLumped, KappaSExact };

const char* to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(const std::string& name);

// Quadrature on the reference element [0, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
};
// Vertex rule reproducing the mass-lumped inner product.
const QuadratureRule& vertex_rule();
// Gauss-Legendre rule with 1 to 5 points.
const QuadratureRule& gauss_rule(int points);
// Rule used wherever a scheme integrates exactly (3-point Gauss, exact to degree 5).
const QuadratureRule& exact_rule();

struct CurvatureProxyField {
    std::vector<double> value;   // K^h(X, kappa)
    std::vector<double> weight;  // 2 on the axis, 1 elsewhere
};

CurvatureProxyField curvature_proxy(const GeneratingCurve& curve, const std::vector<VertexFrame>& vertices,
                                    const std::vector<double>& kappa);

// Area-difference term: for Kappa, 2 pi (x1 kappa - nu.e1, |X_rho|)^h - M0;
// for the kappaS schemes 2 pi (x1 kappaS, |X_rho|) - M0, lumped or exact.
double ade_term(const GeneratingCurve& curve, const CurveGeometry& geometry, const std::vector<double>& field,
                SchemeKind scheme, double M0);

// Discrete energy. The bulk terms use the geometry of `geometry_curve` with the
// curvature field supplied; the line-energy sum uses `boundary_curve` and the
// Gaussian term uses the supplied conormals. Passing the same level for both
// curves gives the same-level energy.
double discrete_energy(SchemeKind scheme, const GeneratingCurve& geometry_curve, const CurveGeometry& geometry,
                       const std::vector<double>& field, const GeneratingCurve& boundary_curve,
                       const std::array<Vec2, 2>& conormals, const ModelParams& params);

double surface_area(const GeneratingCurve& curve);
// Positive when nu is the outer normal. Requires a closed surface.
double enclosed_volume(const GeneratingCurve& curve);
// Nodal gradients of surface_area and enclosed_volume (exact first variations).
std::vector<Vec2> area_gradient(const GeneratingCurve& curve);
std::vector<Vec2> volume_gradient(const GeneratingCurve& curve);

double mesh_ratio(const GeneratingCurve& curve);
double hyperbolic_length(const GeneratingCurve& curve);

struct TurningNumber {
    int value = 0;
    double raw = 0.0;
    bool clean = true;  // |raw - value| <= 1e-6
};
TurningNumber turning_number(const GeneratingCurve& curve);

}  // namespace axiwill
