#include "axiwill/scheme_kappa.hpp"

#include "axiwill/errors.hpp"

#include <cmath>
#include <numbers>

namespace axiwill::kappa_scheme {

namespace {
constexpr double kPi = std::numbers::pi;
const Vec2 kE1(1.0, 0.0);
const Vec2 kE2(0.0, 1.0);
}  // namespace

SchemeState init_state(const GeneratingCurve& curve, const ModelParams& params) {
    params.check();
    check_assembly_domain(curve);
    const CurveGeometry g = build_geometry(curve);
    const int n = curve.node_count();
    const std::vector<Vec2> kv = initial_vector_curvature(curve, g);

    SchemeState s;
    s.curve = curve;
    s.kappa.assign(n, 0.0);
    for (int k = 0; k < n; ++k)
        if (!curve.is_axis_node(k)) s.kappa[k] = kv[k].dot(g.vertices[k].unit);

    const double ade = ade_term(curve, g, s.kappa, SchemeKind::Kappa, params.M0);
    const CurvatureProxyField proxy = curvature_proxy(curve, g.vertices, s.kappa);
    s.Y.assign(n, Vec2::Zero());
    for (int k = 0; k < n; ++k) {
        const VertexFrame& v = g.vertices[k];
        const Vec2 ystar = 2.0 * kPi * curve.nodes[k].x() *
                           (params.alpha * (proxy.value[k] - params.kbar) + params.beta * ade) * v.unit /
                           v.omega.norm();
        const auto kind = curve.boundary_kind(k);
        if (kind && *kind == BoundaryKind::Axis)
            s.Y[k] = ystar.y() * kE2;
        else if (kind && has_conormal_unknown(*kind))
            s.Y[k] = 2.0 * kPi * params.alphaG * kE1;
        else
            s.Y[k] = ystar;
    }
    if (!curve.periodic()) {
        s.conormal[0] = -g.elements.front().tau;
        s.conormal[1] = g.elements.back().tau;
    }
    return s;
}

std::vector<Vec2> explicit_force(const SchemeState& state, const CurveGeometry& g, const ModelParams& params) {
    const GeneratingCurve& curve = state.curve;
    const int n = curve.node_count();
    const CurvatureProxyField proxy = curvature_proxy(curve, g.vertices, state.kappa);
    const double ade = ade_term(curve, g, state.kappa, SchemeKind::Kappa, params.M0);

    std::vector<double> bulk(n), bend(n);
    for (int k = 0; k < n; ++k) {
        const double d = proxy.value[k] - params.kbar;
        bulk[k] = params.alpha * d * d + 2.0 * params.lambda + 2.0 * params.beta * ade * state.kappa[k];
        bend[k] = d * (proxy.weight[k] - 2.0);  // vanishes on the axis
    }

    std::vector<Vec2> F(n, Vec2::Zero());
    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e), b = curve.element_end(e);
        const ElementFrame& f = g.elements[e];
        const double xa = curve.nodes[a].x(), xb = curve.nodes[b].x();
        Vec2 grad = Vec2::Zero();  // coefficient of chi(b) - chi(a)

        // explicit tangential term (Y_rho . tau, chi_rho . tau |X_rho|^{-1}) moved right
        grad -= (state.Y[b] - state.Y[a]).dot(f.tau) / f.length * f.tau;

        // -pi (bulk, chi.e1 |X_rho| + x1 tau . chi_rho)^h
        F[a].x() -= 0.5 * kPi * bulk[a] * f.length;
        F[b].x() -= 0.5 * kPi * bulk[b] * f.length;
        grad -= 0.5 * kPi * (bulk[a] * xa + bulk[b] * xb) * f.tau;

        // 2 pi alpha ([K - kbar](Z - 2) e1, (nu.chi_rho) tau + (tau.chi_rho)(omega - nu))^h
        for (int k : {a, b})
            grad += kPi * params.alpha * bend[k] *
                    (f.tau.x() * f.nu + (g.vertices[k].omega.x() - f.nu.x()) * f.tau);

        // (kappa Y^perp - 2 pi beta A e2, chi_rho)^h
        for (int k : {a, b}) grad += 0.5 * (state.kappa[k] * perp(state.Y[k]) - 2.0 * kPi * params.beta * ade * kE2);

        F[b] += grad;
        F[a] -= grad;
    }

    // 2 pi alpha ([K - kbar](Z - 2), (omega.e1 / x1) chi.e1 |X_rho|)^h
    for (int k = 0; k < n; ++k) {
        if (curve.is_axis_node(k)) continue;
        const VertexFrame& v = g.vertices[k];
        F[k].x() += 2.0 * kPi * params.alpha * v.weight * bend[k] * v.omega.x() / curve.nodes[k].x();
    }

    if (!curve.periodic()) {
        for (int p = 0; p < 2; ++p) {
            const BoundaryKind kind = curve.ends[p];
            if (kind == BoundaryKind::Semifree2 || kind == BoundaryKind::Free)
                F[p == 0 ? 0 : n - 1].x() -= 2.0 * kPi * params.sigma;
        }
    }
    return F;
}

std::vector<Vec2> side_constraint_action(const GeneratingCurve& current, const CurveGeometry& g,
                                         const std::vector<double>& kappa, const GeneratingCurve& next) {
    const int n = current.node_count();
    std::vector<Vec2> out(n, Vec2::Zero());
    for (int k = 0; k < n; ++k) out[k] = g.vertices[k].weight * kappa[k] * g.vertices[k].omega;
    for (int e = 0; e < current.elements(); ++e) {
        const int a = current.element_start(e), b = current.element_end(e);
        const Vec2 flux = (next.nodes[b] - next.nodes[a]) / g.elements[e].length;
        out[b] += flux;
        out[a] -= flux;
    }
    return out;
}

BlockSystem assemble_step(const SchemeState& state, const ModelParams& params, double dt) {
    params.check();
    if (!(dt > 0.0)) fail(ErrorKind::InvalidConfig, "time step must be positive");
    const GeneratingCurve& curve = state.curve;
    check_assembly_domain(curve);

    BlockSystem sys;
    sys.scheme = SchemeKind::Kappa;
    sys.params = params;
    sys.dt = dt;
    sys.rule = &vertex_rule();
    sys.geometry = build_geometry(curve);
    sys.dofs = build_dof_map(curve, SchemeKind::Kappa);
    const CurveGeometry& g = sys.geometry;
    const DofMap& d = sys.dofs;
    const int n = curve.node_count();

    sys.fixed_Y.assign(n, Vec2::Zero());
    for (int k = 0; k < n; ++k) {
        const auto kind = curve.boundary_kind(k);
        if (kind && has_conormal_unknown(*kind)) sys.fixed_Y[k] = 2.0 * kPi * params.alphaG * kE1;
    }

    sys.matrix = linsolve::SparseMatrix(d.size());
    sys.rhs = Eigen::VectorXd::Zero(d.size());
    auto& A = sys.matrix;
    auto& rhs = sys.rhs;
    // Adds a coefficient against a costate component, moving prescribed values right.
    auto add_y = [&](int row, int node, int comp, double value) {
        if (row < 0) return;
        const int col = d.y[node][comp];
        if (col >= 0)
            A.add(row, col, value);
        else
            rhs[row] -= value * sys.fixed_Y[node][comp];
    };
    auto add = [&](int row, int col, double value) {
        if (row >= 0 && col >= 0) A.add(row, col, value);
    };

    // Side constraint rows (test space with zero values at conormal endpoints).
    for (int k = 0; k < n; ++k) {
        const VertexFrame& v = g.vertices[k];
        for (int i = 0; i < 2; ++i) add(d.y[k][i], d.kappa[k], v.weight * v.omega[i]);
        const auto kind = curve.boundary_kind(k);
        if (kind && *kind == BoundaryKind::Clamped) {
            const Vec2 zeta = params.clamp_direction(*curve.endpoint_index(k));
            for (int i = 0; i < 2; ++i)
                if (d.y[k][i] >= 0) rhs[d.y[k][i]] += zeta[i];
        }
    }
    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e), b = curve.element_end(e);
        const ElementFrame& f = g.elements[e];
        for (int i = 0; i < 2; ++i) {
            const double c = 1.0 / f.length;
            add(d.y[a][i], d.x[a][i], c);
            add(d.y[a][i], d.x[b][i], -c);
            add(d.y[b][i], d.x[a][i], -c);
            add(d.y[b][i], d.x[b][i], c);
            if (d.y[b][i] >= 0) rhs[d.y[b][i]] -= f.tau[i];
            if (d.y[a][i] >= 0) rhs[d.y[a][i]] += f.tau[i];
        }
    }

    // Position equation rows.
    const std::vector<Vec2> F = explicit_force(state, g, params);
    for (int k = 0; k < n; ++k) {
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
    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e), b = curve.element_end(e);
        const double c = 1.0 / g.elements[e].length;
        for (int i = 0; i < 2; ++i) {
            add_y(d.x[a][i], a, i, -c);
            add_y(d.x[a][i], b, i, c);
            add_y(d.x[b][i], a, i, c);
            add_y(d.x[b][i], b, i, -c);
        }
    }

    // Curvature rows.
    const double ade = ade_term(curve, g, state.kappa, SchemeKind::Kappa, params.M0);
    for (int k = 0; k < n; ++k) {
        const int row = d.kappa[k];
        if (row < 0) continue;
        const VertexFrame& v = g.vertices[k];
        const double x1 = curve.nodes[k].x();
        add(row, row, 2.0 * kPi * params.alpha * v.weight * x1);
        for (int i = 0; i < 2; ++i) add_y(row, k, i, -v.weight * v.omega[i]);
        rhs[row] += 2.0 * kPi * v.weight * (params.alpha * v.omega.x() + x1 * (params.alpha * params.kbar - params.beta * ade));
    }

    A.finalize();
    return sys;
}

}  // namespace axiwill::kappa_scheme
