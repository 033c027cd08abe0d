#include "axiwill/scheme_kappa_s.hpp"

#include "axiwill/errors.hpp"

#include <cmath>
#include <numbers>

namespace axiwill::kappa_s_scheme {

namespace {
constexpr double kPi = std::numbers::pi;
const Vec2 kE1(1.0, 0.0);
const Vec2 kE2(0.0, 1.0);

double lerp(double a, double b, double s) { return a + s * (b - a); }
Vec2 lerp(const Vec2& a, const Vec2& b, double s) { return a + s * (b - a); }

SchemeKind kind_of(bool exact) { return exact ? SchemeKind::KappaSExact : SchemeKind::KappaSLumped; }

const QuadratureRule& rule_of(bool exact) { return exact ? exact_rule() : vertex_rule(); }

double ade_with_rule(const GeneratingCurve& curve, const CurveGeometry& g, const std::vector<double>& field,
                     const QuadratureRule& rule, double M0) {
    double sum = 0.0;
    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e), b = curve.element_end(e);
        double local = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double s = rule.points[q];
            local += rule.weights[q] * lerp(curve.nodes[a].x(), curve.nodes[b].x(), s) * lerp(field[a], field[b], s);
        }
        sum += g.elements[e].length * local;
    }
    return 2.0 * kPi * sum - M0;
}
}  // namespace

SchemeState init_state(const GeneratingCurve& curve, const ModelParams& params, bool exact) {
    params.check();
    check_assembly_domain(curve);
    const CurveGeometry g = build_geometry(curve);
    const int n = curve.node_count();
    const std::vector<Vec2> kv = initial_vector_curvature(curve, g);

    std::vector<double> kappa(n, 0.0);
    for (int k = 0; k < n; ++k)
        if (!curve.is_axis_node(k)) kappa[k] = kv[k].dot(g.vertices[k].unit);

    SchemeState s;
    s.curve = curve;
    s.kappa = curvature_proxy(curve, g.vertices, kappa).value;
    const double ade = ade_term(curve, g, s.kappa, kind_of(exact), params.M0);
    s.Y.assign(n, Vec2::Zero());
    for (int k = 0; k < n; ++k) {
        const VertexFrame& v = g.vertices[k];
        const Vec2 ystar =
            2.0 * kPi * (params.alpha * (s.kappa[k] - params.kbar) + params.beta * ade) * v.unit / v.omega.norm();
        const auto kind = curve.boundary_kind(k);
        if (kind && *kind == BoundaryKind::Axis) {
            s.Y[k] = ystar.y() * kE2;
        } else if (kind && has_conormal_unknown(*kind)) {
            if (!(curve.nodes[k].x() > 0.0)) fail(ErrorKind::DivisionByAxis, "conormal endpoint on the axis");
            s.Y[k] = 2.0 * kPi * params.alphaG * kE1 / curve.nodes[k].x();
        } else {
            s.Y[k] = ystar;
        }
    }
    if (!curve.periodic()) {
        s.conormal[0] = -g.elements.front().tau;
        s.conormal[1] = g.elements.back().tau;
    }
    return s;
}

std::vector<Vec2> explicit_force(const SchemeState& state, const CurveGeometry& g, const ModelParams& params,
                                 const QuadratureRule& rule) {
    const GeneratingCurve& curve = state.curve;
    const int n = curve.node_count();
    const auto& ks = state.kappa;
    const auto& Y = state.Y;
    const double ade = ade_with_rule(curve, g, ks, rule, params.M0);

    std::vector<Vec2> F(n, Vec2::Zero());
    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e), b = curve.element_end(e);
        const ElementFrame& f = g.elements[e];
        const double xa = curve.nodes[a].x(), xb = curve.nodes[b].x();
        const double xbar = 0.5 * (xa + xb);
        const Vec2 dY = Y[b] - Y[a];
        Vec2 grad = Vec2::Zero();  // coefficient of chi(b) - chi(a)

        // explicit tangential term (x1 Y_rho . tau, chi_rho . tau |X_rho|^{-1}) moved right
        grad -= xbar * dY.dot(f.tau) / f.length * f.tau;

        double r1 = 0.0;
        Vec2 r3 = Vec2::Zero();
        double r2a = 0.0, r2b = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double s = rule.points[q], w = rule.weights[q];
            const double x1 = lerp(xa, xb, s);
            const double k = lerp(ks[a], ks[b], s);
            const Vec2 y = lerp(Y[a], Y[b], s);
            const double G = params.alpha * (k - params.kbar) * (k - params.kbar) + 2.0 * params.lambda +
                             2.0 * params.beta * ade * k;
            // -(pi x1 G - Y.e1, chi_rho . tau)^(h)
            r1 -= w * (kPi * x1 * G - y.x());
            // -([pi G - kappaS Y.nu] |X_rho| - Y_rho . tau, chi.e1)^(h)
            const double integrand = (kPi * G - k * y.dot(f.nu)) * f.length - dY.dot(f.tau);
            r2a -= w * integrand * (1.0 - s);
            r2b -= w * integrand * s;
            // (x1 kappaS Y^perp, chi_rho)^(h)
            r3 += w * x1 * k * perp(y);
        }
        grad += r1 * f.tau + r3;
        F[a].x() += r2a;
        F[b].x() += r2b;
        F[b] += grad;
        F[a] -= grad;
    }
    if (!curve.periodic()) {
        for (int p = 0; p < 2; ++p) {
            const BoundaryKind kind = curve.ends[p];
            if (kind == BoundaryKind::Semifree2 || kind == BoundaryKind::Free) {
                const int node = p == 0 ? 0 : n - 1;
                F[node].x() -= 2.0 * kPi * params.sigma + state.conormal[p].dot(Y[node]);
            }
        }
    }
    return F;
}

std::vector<Vec2> side_constraint_action(const GeneratingCurve& current, const CurveGeometry& g,
                                         const std::vector<double>& kappaS, const GeneratingCurve& next,
                                         const QuadratureRule& rule) {
    const int n = current.node_count();
    std::vector<Vec2> out(n, Vec2::Zero());
    for (int e = 0; e < current.elements(); ++e) {
        const int a = current.element_start(e), b = current.element_end(e);
        const ElementFrame& f = g.elements[e];
        const double xa = current.nodes[a].x(), xb = current.nodes[b].x();
        double ma = 0.0, mb = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double s = rule.points[q], w = rule.weights[q];
            const double v = w * lerp(xa, xb, s) * lerp(kappaS[a], kappaS[b], s);
            ma += v * (1.0 - s);
            mb += v * s;
        }
        out[a] += f.length * ma * f.nu + 0.5 * f.length * kE1;
        out[b] += f.length * mb * f.nu + 0.5 * f.length * kE1;
        const Vec2 flux = 0.5 * (xa + xb) * (next.nodes[b] - next.nodes[a]) / f.length;
        out[b] += flux;
        out[a] -= flux;
    }
    return out;
}

BlockSystem assemble_step(const SchemeState& state, const ModelParams& params, double dt, bool exact,
                          const QuadratureRule* rule_override) {
    params.check();
    if (!(dt > 0.0)) fail(ErrorKind::InvalidConfig, "time step must be positive");
    const GeneratingCurve& curve = state.curve;
    check_assembly_domain(curve);
    const SchemeKind scheme = kind_of(exact);
    const QuadratureRule& rule = rule_override ? *rule_override : rule_of(exact);

    BlockSystem sys;
    sys.scheme = scheme;
    sys.params = params;
    sys.dt = dt;
    sys.rule = &rule;
    sys.geometry = build_geometry(curve);
    sys.dofs = build_dof_map(curve, scheme);
    const CurveGeometry& g = sys.geometry;
    const DofMap& d = sys.dofs;
    const int n = curve.node_count();

    sys.fixed_Y.assign(n, Vec2::Zero());
    for (int k = 0; k < n; ++k) {
        const auto kind = curve.boundary_kind(k);
        if (kind && has_conormal_unknown(*kind)) sys.fixed_Y[k] = 2.0 * kPi * params.alphaG * kE1 / curve.nodes[k].x();
    }

    sys.matrix = linsolve::SparseMatrix(d.size());
    sys.rhs = Eigen::VectorXd::Zero(d.size());
    auto& A = sys.matrix;
    auto& rhs = sys.rhs;
    auto add_y = [&](int row, int node, int comp, double value) {
        if (row < 0) return;
        const int col = d.y[node][comp];
        if (col >= 0)
            A.add(row, col, value);
        else
            rhs[row] -= value * sys.fixed_Y[node][comp];
    };
    auto add = [&](int row, int col, double value) {
        if (row >= 0 && col >= 0 && value != 0.0) A.add(row, col, value);
    };

    const double ade = ade_with_rule(curve, g, state.kappa, rule, params.M0);
    const std::vector<Vec2> F = explicit_force(state, g, params, rule);

    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e), b = curve.element_end(e);
        const ElementFrame& f = g.elements[e];
        const double xa = curve.nodes[a].x(), xb = curve.nodes[b].x();
        const double xbar = 0.5 * (xa + xb);
        const int nodes[2] = {a, b};

        // weighted mass M[r][c] = L int x1 phi_r phi_c with the switchable rule
        double M[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double s = rule.points[q], w = rule.weights[q];
            const double phi[2] = {1.0 - s, s};
            const double x1 = lerp(xa, xb, s);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) M[r][c] += f.length * w * x1 * phi[r] * phi[c];
        }

        for (int r = 0; r < 2; ++r) {
            const int k = nodes[r];
            for (int c = 0; c < 2; ++c) {
                const int l = nodes[c];
                const double sgn = (r == c) ? 1.0 : -1.0;
                for (int i = 0; i < 2; ++i) {
                    // side constraint: (x1 kappaS nu, eta |X_rho|)^(h) + (x1 X_rho, eta_rho |X_rho|^{-1})
                    add(d.y[k][i], d.kappa[l], M[r][c] * f.nu[i]);
                    add(d.y[k][i], d.x[l][i], sgn * xbar / f.length);
                    // position equation: -(x1 Y_rho, chi_rho |X_rho|^{-1})
                    add_y(d.x[k][i], l, i, -sgn * xbar / f.length);
                    // curvature equation: -(x1 Y, chi nu |X_rho|)^(h)
                    add_y(d.kappa[k], l, i, -M[r][c] * f.nu[i]);
                }
                // curvature equation: 2 pi alpha (x1 kappaS, chi |X_rho|)^(h)
                add(d.kappa[k], d.kappa[l], 2.0 * kPi * params.alpha * M[r][c]);
            }
            // right-hand sides
            const double sgn_k = (r == 1) ? 1.0 : -1.0;
            for (int i = 0; i < 2; ++i) {
                if (d.y[k][i] >= 0) {
                    rhs[d.y[k][i]] -= (i == 0 ? 0.5 * f.length : 0.0) + sgn_k * xbar * f.tau[i];
                }
            }
            if (d.kappa[k] >= 0)
                rhs[d.kappa[k]] += 2.0 * kPi * (params.alpha * params.kbar - params.beta * ade) * (M[r][0] + M[r][1]);
        }
    }

    for (int k = 0; k < n; ++k) {
        const auto kind = curve.boundary_kind(k);
        if (kind && *kind == BoundaryKind::Clamped) {
            const Vec2 zeta = params.clamp_direction(*curve.endpoint_index(k));
            for (int i = 0; i < 2; ++i)
                if (d.y[k][i] >= 0) rhs[d.y[k][i]] += curve.nodes[k].x() * zeta[i];
        }
        const VertexFrame& v = g.vertices[k];
        const double m = 2.0 * kPi / dt * v.weight * curve.nodes[k].x();
        for (int i = 0; i < 2; ++i) {
            const int row = d.x[k][i];
            if (row < 0) continue;
            for (int j = 0; j < 2; ++j)
                if (v.projection(i, j) != 0.0) add(row, d.x[k][j], m * v.projection(i, j));
            rhs[row] += F[k][i];
        }
    }

    A.finalize();
    return sys;
}

}  // namespace axiwill::kappa_s_scheme
