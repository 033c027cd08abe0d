#include "axiwill/scheme_common.hpp"

#include "axiwill/errors.hpp"
#include "axiwill/scheme_kappa.hpp"
#include "axiwill/scheme_kappa_s.hpp"

#include <cmath>
#include <sstream>

namespace axiwill {

DofMap build_dof_map(const GeneratingCurve& curve, SchemeKind scheme) {
    const int n = curve.node_count();
    DofMap d;
    d.y.assign(n, {-1, -1});
    d.x.assign(n, {-1, -1});
    d.kappa.assign(n, -1);
    for (int k = 0; k < n; ++k) {
        const auto kind = curve.boundary_kind(k);
        const bool axis = kind && *kind == BoundaryKind::Axis;
        const bool conormal = kind && has_conormal_unknown(*kind);
        for (int i = 0; i < 2; ++i) {
            if (conormal || (axis && i == 0)) continue;
            d.y[k][i] = d.ny++;
        }
        for (int i = 0; i < 2; ++i) {
            bool fixed = axis && i == 0;
            if (kind) {
                switch (*kind) {
                    case BoundaryKind::Clamped:
                    case BoundaryKind::Navier: fixed = true; break;
                    case BoundaryKind::Semifree1: fixed = fixed || i == 0; break;
                    case BoundaryKind::Semifree2: fixed = fixed || i == 1; break;
                    default: break;
                }
            }
            if (!fixed) d.x[k][i] = d.nx++;
        }
    }
    for (int k = 0; k < n; ++k) {
        if (curve.is_axis_node(k) && scheme != SchemeKind::KappaSExact) continue;
        d.kappa[k] = d.nk++;
    }
    // shift into the stacked numbering
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < 2; ++i)
            if (d.x[k][i] >= 0) d.x[k][i] += d.ny;
        if (d.kappa[k] >= 0) d.kappa[k] += d.ny + d.nx;
    }
    return d;
}

void check_assembly_domain(const GeneratingCurve& curve) {
    for (int k = 0; k < curve.node_count(); ++k) {
        if (curve.is_axis_node(k)) {
            if (curve.nodes[k].x() != 0.0) {
                std::ostringstream os;
                os << "axis endpoint " << k << " has left the axis";
                fail(ErrorKind::AssemblyDomainError, os.str());
            }
        } else if (!(curve.nodes[k].x() > 0.0)) {
            std::ostringstream os;
            os << "vertex " << k << " reached the axis (x1 = " << curve.nodes[k].x() << ")";
            fail(ErrorKind::AssemblyDomainError, os.str());
        }
        if (!curve.nodes[k].allFinite()) fail(ErrorKind::NonFiniteSolution, "non-finite node position");
    }
}

std::vector<Vec2> initial_vector_curvature(const GeneratingCurve& curve, const CurveGeometry& geometry) {
    const int n = curve.node_count();
    std::vector<Vec2> kv(n, Vec2::Zero());
    for (int k = 0; k < n; ++k) {
        const int l = curve.left_element(k), r = curve.right_element(k);
        Vec2 s = Vec2::Zero();
        if (r >= 0) s += geometry.elements[r].tau;
        if (l >= 0) s -= geometry.elements[l].tau;
        const auto kind = curve.boundary_kind(k);
        if (kind && *kind != BoundaryKind::Axis) {
            // true conormal (-1)^{p+1} tau(p) on the right-hand side
            s += (k == 0 ? -geometry.elements[r].tau : geometry.elements[l].tau);
        }
        kv[k] = s / geometry.vertices[k].weight;
        if (kind && *kind == BoundaryKind::Axis) kv[k].x() = 0.0;
    }
    return kv;
}

SchemeState unpack_solution(const BlockSystem& system, const SchemeState& current, const Eigen::VectorXd& z) {
    const DofMap& d = system.dofs;
    if (z.size() != d.size()) fail(ErrorKind::DimensionMismatch, "solution vector does not match the system");
    SchemeState next;
    next.curve = current.curve;
    next.conormal = current.conormal;
    next.time = current.time + system.dt;
    const int n = current.curve.node_count();
    next.kappa.assign(n, 0.0);
    next.Y = system.fixed_Y;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < 2; ++i) {
            if (d.x[k][i] >= 0) next.curve.nodes[k][i] += z[d.x[k][i]];
            if (d.y[k][i] >= 0) next.Y[k][i] = z[d.y[k][i]];
        }
        if (d.kappa[k] >= 0) next.kappa[k] = z[d.kappa[k]];
    }
    return next;
}

double recover_conormals(const BlockSystem& system, const SchemeState& current, SchemeState& next) {
    const GeneratingCurve& curve = current.curve;
    const bool kappa_scheme = system.scheme == SchemeKind::Kappa;
    const std::vector<Vec2> action =
        kappa_scheme ? kappa_scheme::side_constraint_action(curve, system.geometry, next.kappa, next.curve)
                     : kappa_s_scheme::side_constraint_action(curve, system.geometry, next.kappa, next.curve,
                                                              *system.rule);
    const int n = curve.node_count();
    double scale = 1.0, residual = 0.0;
    for (int k = 0; k < n; ++k) scale = std::max(scale, action[k].lpNorm<Eigen::Infinity>());
    for (int k = 0; k < n; ++k) {
        const auto p = curve.endpoint_index(k);
        const auto kind = curve.boundary_kind(k);
        const double weight = kappa_scheme ? 1.0 : curve.nodes[k].x();
        Vec2 r = action[k];
        if (kind && *kind == BoundaryKind::Clamped) r -= weight * system.params.clamp_direction(*p);
        if (kind && has_conormal_unknown(*kind)) {
            next.conormal[*p] = action[k] / weight;
            continue;
        }
        if (kind && *kind == BoundaryKind::Axis) r.x() = 0.0;
        residual = std::max(residual, r.lpNorm<Eigen::Infinity>());
    }
    return residual / scale;
}

SchemeState solve_step(const BlockSystem& system, const SchemeState& current, StepReport* report) {
    auto lu = linsolve::factor(system.matrix);
    auto [z, solve_report] = lu.solve(system.rhs);
    SchemeState next = unpack_solution(system, current, z);
    const double residual = recover_conormals(system, current, next);
    if (report) {
        report->solve = solve_report;
        report->side_residual = residual;
    }
    return next;
}

BlockSystem assemble(const SchemeState& state, const ModelParams& params, double dt, SchemeKind scheme) {
    switch (scheme) {
        case SchemeKind::Kappa: return kappa_scheme::assemble_step(state, params, dt);
        case SchemeKind::KappaSLumped: return kappa_s_scheme::assemble_step(state, params, dt, false);
        case SchemeKind::KappaSExact: return kappa_s_scheme::assemble_step(state, params, dt, true);
    }
    fail(ErrorKind::InvalidConfig, "unknown scheme");
}

SchemeState advance(const SchemeState& state, const ModelParams& params, double dt, SchemeKind scheme,
                    StepReport* report) {
    return solve_step(assemble(state, params, dt, scheme), state, report);
}

SchemeState initial_state(const GeneratingCurve& curve, const ModelParams& params, SchemeKind scheme) {
    switch (scheme) {
        case SchemeKind::Kappa: return kappa_scheme::init_state(curve, params);
        case SchemeKind::KappaSLumped: return kappa_s_scheme::init_state(curve, params, false);
        case SchemeKind::KappaSExact: return kappa_s_scheme::init_state(curve, params, true);
    }
    fail(ErrorKind::InvalidConfig, "unknown scheme");
}

}  // namespace axiwill
