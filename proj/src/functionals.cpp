#include "axiwill/functionals.hpp"

#include "axiwill/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace axiwill {

namespace {
constexpr double kPi = std::numbers::pi;

double lerp(double a, double b, double s) { return a + s * (b - a); }
}  // namespace

Vec2 ModelParams::clamp_direction(int endpoint) const {
    const double t = clamp_angles.at(endpoint);
    return Vec2(std::sin(t), std::cos(t));
}

void ModelParams::check() const {
    if (!(alpha > 0.0)) fail(ErrorKind::InvalidConfig, "alpha must be positive");
    if (!(beta >= 0.0)) fail(ErrorKind::InvalidConfig, "beta must be non-negative");
    for (double v : {alpha, kbar, lambda, beta, M0, alphaG, sigma, clamp_angles[0], clamp_angles[1]})
        if (!std::isfinite(v)) fail(ErrorKind::InvalidConfig, "model parameters must be finite");
}

const char* to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Kappa: return "kappa";
        case SchemeKind::KappaSLumped: return "kappaS_lumped";
        case SchemeKind::KappaSExact: return "kappaS_exact";
    }
    return "unknown";
}

SchemeKind scheme_kind_from_string(const std::string& name) {
    for (auto k : {SchemeKind::Kappa, SchemeKind::KappaSLumped, SchemeKind::KappaSExact})
        if (name == to_string(k)) return k;
    fail(ErrorKind::InvalidConfig, "unknown scheme '" + name + "'");
}

const QuadratureRule& vertex_rule() {
    static const QuadratureRule rule{{0.0, 1.0}, {0.5, 0.5}};
    return rule;
}

const QuadratureRule& gauss_rule(int points) {
    static const std::array<QuadratureRule, 5> rules = [] {
        std::array<QuadratureRule, 5> r;
        auto map = [](std::vector<double> x, std::vector<double> w) {
            QuadratureRule q;
            for (size_t i = 0; i < x.size(); ++i) {
                q.points.push_back(0.5 * (x[i] + 1.0));
                q.weights.push_back(0.5 * w[i]);
            }
            return q;
        };
        r[0] = map({0.0}, {2.0});
        const double a2 = 1.0 / std::sqrt(3.0);
        r[1] = map({-a2, a2}, {1.0, 1.0});
        const double a3 = std::sqrt(0.6);
        r[2] = map({-a3, 0.0, a3}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0});
        const double p4a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
        const double p4b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
        const double w4a = (18.0 + std::sqrt(30.0)) / 36.0;
        const double w4b = (18.0 - std::sqrt(30.0)) / 36.0;
        r[3] = map({-p4b, -p4a, p4a, p4b}, {w4b, w4a, w4a, w4b});
        const double p5a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double p5b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double w5a = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double w5b = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        r[4] = map({-p5b, -p5a, 0.0, p5a, p5b}, {w5b, w5a, 128.0 / 225.0, w5a, w5b});
        return r;
    }();
    if (points < 1 || points > 5) fail(ErrorKind::InvalidConfig, "Gauss rule supports 1 to 5 points");
    return rules[points - 1];
}

const QuadratureRule& exact_rule() { return gauss_rule(3); }

CurvatureProxyField curvature_proxy(const GeneratingCurve& curve, const std::vector<VertexFrame>& vertices,
                                    const std::vector<double>& kappa) {
    const int n = curve.node_count();
    if (static_cast<int>(kappa.size()) != n || static_cast<int>(vertices.size()) != n)
        fail(ErrorKind::DimensionMismatch, "curvature_proxy: one value per node required");
    CurvatureProxyField out;
    out.value.resize(n);
    out.weight.resize(n);
    for (int k = 0; k < n; ++k) {
        if (curve.is_axis_node(k)) {
            out.weight[k] = 2.0;
            out.value[k] = 2.0 * kappa[k];
            continue;
        }
        const double x1 = curve.nodes[k].x();
        if (!(x1 > 0.0)) {
            std::ostringstream os;
            os << "vertex " << k << " lies on the axis but is not an axis endpoint";
            fail(ErrorKind::DivisionByAxis, os.str());
        }
        out.weight[k] = 1.0;
        out.value[k] = kappa[k] - vertices[k].omega.x() / x1;
    }
    return out;
}

double ade_term(const GeneratingCurve& curve, const CurveGeometry& geometry, const std::vector<double>& field,
                SchemeKind scheme, double M0) {
    if (static_cast<int>(field.size()) != curve.node_count())
        fail(ErrorKind::DimensionMismatch, "ade_term: one value per node required");
    double sum = 0.0;
    if (scheme == SchemeKind::Kappa) {
        for (int k = 0; k < curve.node_count(); ++k)
            sum += geometry.vertices[k].weight * curve.nodes[k].x() * field[k];
        for (const auto& e : geometry.elements) sum -= e.length * e.nu.x();
    } else {
        const QuadratureRule& rule = scheme == SchemeKind::KappaSExact ? exact_rule() : vertex_rule();
        for (int e = 0; e < curve.elements(); ++e) {
            const int a = curve.element_start(e), b = curve.element_end(e);
            double local = 0.0;
            for (size_t q = 0; q < rule.points.size(); ++q) {
                const double s = rule.points[q];
                local += rule.weights[q] * lerp(curve.nodes[a].x(), curve.nodes[b].x(), s) * lerp(field[a], field[b], s);
            }
            sum += geometry.elements[e].length * local;
        }
    }
    return 2.0 * kPi * sum - M0;
}

double discrete_energy(SchemeKind scheme, const GeneratingCurve& geometry_curve, const CurveGeometry& geometry,
                       const std::vector<double>& field, const GeneratingCurve& boundary_curve,
                       const std::array<Vec2, 2>& conormals, const ModelParams& params) {
    double bulk = 0.0;
    if (scheme == SchemeKind::Kappa) {
        const CurvatureProxyField proxy = curvature_proxy(geometry_curve, geometry.vertices, field);
        for (int k = 0; k < geometry_curve.node_count(); ++k) {
            const double d = proxy.value[k] - params.kbar;
            bulk += geometry.vertices[k].weight * geometry_curve.nodes[k].x() *
                    (params.alpha * d * d + 2.0 * params.lambda);
        }
    } else {
        const QuadratureRule& rule = scheme == SchemeKind::KappaSExact ? exact_rule() : vertex_rule();
        for (int e = 0; e < geometry_curve.elements(); ++e) {
            const int a = geometry_curve.element_start(e), b = geometry_curve.element_end(e);
            double local = 0.0;
            for (size_t q = 0; q < rule.points.size(); ++q) {
                const double s = rule.points[q];
                const double d = lerp(field[a], field[b], s) - params.kbar;
                local += rule.weights[q] * lerp(geometry_curve.nodes[a].x(), geometry_curve.nodes[b].x(), s) *
                         (params.alpha * d * d + 2.0 * params.lambda);
            }
            bulk += geometry.elements[e].length * local;
        }
    }
    double energy = kPi * bulk;
    if (params.beta != 0.0) {
        const double ade = ade_term(geometry_curve, geometry, field, scheme, params.M0);
        energy += 0.5 * params.beta * ade * ade;
    }
    if (!geometry_curve.periodic()) {
        for (int p = 0; p < 2; ++p) {
            const BoundaryKind kind = geometry_curve.ends[p];
            if (has_conormal_unknown(kind)) energy -= 2.0 * kPi * params.alphaG * conormals[p].x();
            if (kind == BoundaryKind::Semifree2 || kind == BoundaryKind::Free) {
                const int node = p == 0 ? 0 : boundary_curve.node_count() - 1;
                energy += 2.0 * kPi * params.sigma * boundary_curve.nodes[node].x();
            }
        }
    }
    return energy;
}

double surface_area(const GeneratingCurve& curve) {
    double sum = 0.0;
    for (int e = 0; e < curve.elements(); ++e) {
        const Vec2& a = curve.nodes[curve.element_start(e)];
        const Vec2& b = curve.nodes[curve.element_end(e)];
        sum += (b - a).norm() * 0.5 * (a.x() + b.x());
    }
    return 2.0 * kPi * sum;
}

double enclosed_volume(const GeneratingCurve& curve) {
    if (!curve.encloses_volume()) fail(ErrorKind::NotClosed, "volume requires a closed surface");
    double sum = 0.0;
    for (int e = 0; e < curve.elements(); ++e) {
        const Vec2& a = curve.nodes[curve.element_start(e)];
        const Vec2& b = curve.nodes[curve.element_end(e)];
        sum += (b.y() - a.y()) * (a.x() * a.x() + a.x() * b.x() + b.x() * b.x()) / 3.0;
    }
    return -kPi * sum;
}

std::vector<Vec2> area_gradient(const GeneratingCurve& curve) {
    // 2 pi [ (e1, chi |X_rho|) + (x1 tau, chi_rho) ]
    std::vector<Vec2> g(curve.node_count(), Vec2::Zero());
    for (int e = 0; e < curve.elements(); ++e) {
        const int ia = curve.element_start(e), ib = curve.element_end(e);
        const Vec2 d = curve.nodes[ib] - curve.nodes[ia];
        const double L = d.norm();
        const Vec2 tau = d / L;
        const double xm = 0.5 * (curve.nodes[ia].x() + curve.nodes[ib].x());
        g[ia] += 2.0 * kPi * (Vec2(0.5 * L, 0.0) - xm * tau);
        g[ib] += 2.0 * kPi * (Vec2(0.5 * L, 0.0) + xm * tau);
    }
    return g;
}

std::vector<Vec2> volume_gradient(const GeneratingCurve& curve) {
    // 2 pi (x1 nu, chi |X_rho|), integrated exactly
    std::vector<Vec2> g(curve.node_count(), Vec2::Zero());
    for (int e = 0; e < curve.elements(); ++e) {
        const int ia = curve.element_start(e), ib = curve.element_end(e);
        const Vec2 d = curve.nodes[ib] - curve.nodes[ia];
        const Vec2 nu_length = -perp(d);
        const double xa = curve.nodes[ia].x(), xb = curve.nodes[ib].x();
        g[ia] += 2.0 * kPi * nu_length * (2.0 * xa + xb) / 6.0;
        g[ib] += 2.0 * kPi * nu_length * (xa + 2.0 * xb) / 6.0;
    }
    return g;
}

double mesh_ratio(const GeneratingCurve& curve) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int e = 0; e < curve.elements(); ++e) {
        const double L = (curve.nodes[curve.element_end(e)] - curve.nodes[curve.element_start(e)]).norm();
        lo = std::min(lo, L);
        hi = std::max(hi, L);
    }
    if (!(lo > 0.0)) fail(ErrorKind::DegenerateElement, "mesh ratio undefined for a zero-length element");
    return hi / lo;
}

double hyperbolic_length(const GeneratingCurve& curve) {
    const auto frames = build_element_frames(curve);
    const auto w = lumped_weights(curve, frames);
    double sum = 0.0;
    for (int k = 0; k < curve.node_count(); ++k) {
        const double x1 = curve.nodes[k].x();
        if (!(x1 > 0.0)) fail(ErrorKind::AxisContact, "hyperbolic length undefined for a curve touching the axis");
        sum += w[k] / x1;
    }
    return sum;
}

TurningNumber turning_number(const GeneratingCurve& curve) {
    if (!curve.periodic()) fail(ErrorKind::NotClosed, "turning number requires a periodic curve");
    const auto frames = build_element_frames(curve);
    double total = 0.0;
    for (int k = 0; k < curve.node_count(); ++k) {
        const Vec2& a = frames[curve.left_element(k)].tau;
        const Vec2& b = frames[curve.right_element(k)].tau;
        total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    TurningNumber t;
    t.raw = total / (2.0 * kPi);
    t.value = static_cast<int>(std::lround(t.raw));
    t.clean = std::abs(t.raw - t.value) <= 1e-6;
    return t;
}

}  // namespace axiwill
