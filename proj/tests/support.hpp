#pragma once

// Generators and independent oracles shared by the unit tests and the
// acceptance binary.

#include "axiwill/curve.hpp"
#include "axiwill/errors.hpp"
#include "axiwill/functionals.hpp"
#include "axiwill/reference.hpp"
#include "axiwill/scheme_common.hpp"
#include "axiwill/scheme_kappa.hpp"
#include "axiwill/scheme_kappa_s.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

namespace axiwill {
// Readable failure messages for error kinds.
inline void PrintTo(ErrorKind kind, std::ostream* os) { *os << to_string(kind); }
}  // namespace axiwill

namespace axiwill::testing_support {

inline constexpr double kPi = std::numbers::pi;
using Rng = std::mt19937_64;

// Kind of the library error raised by `f`, if any.
inline std::optional<ErrorKind> kind_of_failure(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Smooth random radial profile 1 + sum a_m cos(m t + phase_m) with |sum a_m| <= 0.25.
struct Wobble {
    std::vector<double> amp, phase;
    explicit Wobble(Rng& rng) {
        for (int m = 2; m <= 4; ++m) {
            amp.push_back(uniform(rng, -0.08, 0.08));
            phase.push_back(uniform(rng, 0.0, 2.0 * kPi));
        }
    }
    double operator()(double t) const {
        double r = 1.0;
        for (size_t i = 0; i < amp.size(); ++i) r += amp[i] * std::cos((i + 2) * t + phase[i]);
        return r;
    }
};

// Star-shaped closed curve strictly inside the right half plane with jittered nodes.
inline GeneratingCurve random_closed_curve(Rng& rng, int J) {
    const double r0 = uniform(rng, 0.3, 1.0);
    const double cx = r0 * 1.3 + uniform(rng, 0.2, 1.5);
    const double cy = uniform(rng, -1.0, 1.0);
    const Wobble w(rng);
    const double sense = uniform_int(rng, 0, 1) ? 1.0 : -1.0;
    std::vector<Vec2> nodes(J);
    for (int j = 0; j < J; ++j) {
        const double t = 2.0 * kPi * (j + uniform(rng, -0.3, 0.3)) / J;
        nodes[j] = Vec2(cx, cy) + r0 * w(t) * Vec2(std::cos(t), sense * std::sin(t));
    }
    return GeneratingCurve::closed(std::move(nodes));
}

// Clockwise perturbed semicircle with both ends exactly on the axis.
inline GeneratingCurve random_axis_curve(Rng& rng, int J) {
    const double r0 = uniform(rng, 0.5, 2.0);
    const double cy = uniform(rng, -1.0, 1.0);
    const Wobble w(rng);
    std::vector<Vec2> nodes(J + 1);
    for (int j = 0; j <= J; ++j) {
        const double jitter = (j == 0 || j == J) ? 0.0 : uniform(rng, -0.3, 0.3);
        const double t = 0.5 * kPi - kPi * (j + jitter) / J;
        nodes[j] = Vec2(0.0, cy) + r0 * w(t) * Vec2(std::cos(t), std::sin(t));
    }
    nodes.front().x() = 0.0;
    nodes.back().x() = 0.0;
    return GeneratingCurve::open(std::move(nodes), BoundaryKind::Axis, BoundaryKind::Axis);
}

// Arc of a wobbly circle away from the axis (or starting on it when the left
// end is an axis endpoint).
inline GeneratingCurve random_open_curve(Rng& rng, int J, BoundaryKind left, BoundaryKind right) {
    const Wobble w(rng);
    std::vector<Vec2> nodes(J + 1);
    if (left == BoundaryKind::Axis) {
        const double r0 = uniform(rng, 0.5, 2.0);
        const double end = uniform(rng, 0.3 * kPi, 0.9 * kPi);
        for (int j = 0; j <= J; ++j) {
            const double jitter = (j == 0 || j == J) ? 0.0 : uniform(rng, -0.3, 0.3);
            const double t = end * (j + jitter) / J;
            nodes[j] = r0 * w(t) * Vec2(std::sin(t), std::cos(t));
        }
        nodes.front().x() = 0.0;
    } else {
        const double r0 = uniform(rng, 0.3, 1.0);
        const double cx = r0 * 1.3 + uniform(rng, 0.2, 1.5);
        const double start = uniform(rng, 0.0, 2.0 * kPi);
        const double span = uniform(rng, 0.5 * kPi, 1.5 * kPi) * (uniform_int(rng, 0, 1) ? 1.0 : -1.0);
        for (int j = 0; j <= J; ++j) {
            const double jitter = (j == 0 || j == J) ? 0.0 : uniform(rng, -0.3, 0.3);
            const double t = start + span * (j + jitter) / J;
            nodes[j] = Vec2(cx, 0.0) + r0 * w(t) * Vec2(std::cos(t), std::sin(t));
        }
    }
    return GeneratingCurve::open(std::move(nodes), left, right);
}

inline BoundaryKind random_non_axis_kind(Rng& rng, bool with_conormal_unknown = true) {
    static const BoundaryKind all[] = {BoundaryKind::Clamped, BoundaryKind::Navier, BoundaryKind::Semifree1,
                                       BoundaryKind::Semifree2, BoundaryKind::Free};
    if (!with_conormal_unknown) return BoundaryKind::Clamped;
    return all[uniform_int(rng, 0, 4)];
}

// Any valid configuration: closed, axis to axis, axis to boundary, boundary to boundary.
inline GeneratingCurve random_valid_curve(Rng& rng) {
    const int J = uniform_int(rng, 6, 40);
    switch (uniform_int(rng, 0, 3)) {
        case 0: return random_closed_curve(rng, J);
        case 1: return random_axis_curve(rng, J);
        case 2: return random_open_curve(rng, J, BoundaryKind::Axis, random_non_axis_kind(rng));
        default: return random_open_curve(rng, J, random_non_axis_kind(rng), random_non_axis_kind(rng));
    }
}

inline ModelParams random_params(Rng& rng) {
    ModelParams p;
    p.alpha = uniform(rng, 0.5, 2.0);
    p.kbar = uniform(rng, -2.0, 2.0);
    p.lambda = uniform(rng, 0.0, 1.0);
    p.beta = uniform(rng, 0.0, 1.0);
    p.M0 = uniform(rng, -5.0, 5.0);
    p.alphaG = uniform(rng, -1.0, 1.0);
    p.sigma = uniform(rng, 0.0, 1.0);
    p.clamp_angles = {uniform(rng, 0.0, 2.0 * kPi), uniform(rng, 0.0, 2.0 * kPi)};
    return p;
}

// Central difference of a scalar function of the node positions, per node and component.
inline std::vector<Vec2> fd_gradient(const GeneratingCurve& curve,
                                     const std::function<double(const GeneratingCurve&)>& f, double step = 1e-6) {
    std::vector<Vec2> g(curve.node_count(), Vec2::Zero());
    for (int k = 0; k < curve.node_count(); ++k)
        for (int i = 0; i < 2; ++i) {
            GeneratingCurve p = curve, m = curve;
            p.nodes[k][i] += step;
            m.nodes[k][i] -= step;
            g[k][i] = (f(p) - f(m)) / (2.0 * step);
        }
    return g;
}

// ---- independent Lagrangians ----------------------------------------------

// Lumped data recomputed from node positions: vertex weight times averaged normal
// equals half the rotated chord of the neighbours.
inline std::vector<Vec2> weighted_normals(const GeneratingCurve& c) {
    const int n = c.node_count();
    std::vector<Vec2> wo(n, Vec2::Zero());
    for (int e = 0; e < c.elements(); ++e) {
        const Vec2 d = c.nodes[c.element_end(e)] - c.nodes[c.element_start(e)];
        const Vec2 half_normal = -0.5 * perp(d);
        wo[c.element_start(e)] += half_normal;
        wo[c.element_end(e)] += half_normal;
    }
    return wo;
}

inline std::vector<double> vertex_masses(const GeneratingCurve& c) {
    std::vector<double> w(c.node_count(), 0.0);
    for (int e = 0; e < c.elements(); ++e) {
        const double L = (c.nodes[c.element_end(e)] - c.nodes[c.element_start(e)]).norm();
        w[c.element_start(e)] += 0.5 * L;
        w[c.element_end(e)] += 0.5 * L;
    }
    return w;
}

// Energy of the kappa scheme with fixed nodal curvature, without the Gaussian term.
inline double kappa_energy(const GeneratingCurve& c, const std::vector<double>& kappa, const ModelParams& p) {
    const auto w = vertex_masses(c);
    const auto wo = weighted_normals(c);
    double bulk = 0.0, ade = 0.0;
    for (int k = 0; k < c.node_count(); ++k) {
        const double x1 = c.nodes[k].x();
        const double proxy = c.is_axis_node(k) ? 2.0 * kappa[k] : kappa[k] - wo[k].x() / w[k] / x1;
        bulk += w[k] * x1 * (p.alpha * (proxy - p.kbar) * (proxy - p.kbar) + 2.0 * p.lambda);
        ade += w[k] * x1 * kappa[k] - wo[k].x();
    }
    const double A = 2.0 * kPi * ade - p.M0;
    double E = kPi * bulk + 0.5 * p.beta * A * A;
    if (!c.periodic())
        for (int e = 0; e < 2; ++e)
            if (c.ends[e] == BoundaryKind::Semifree2 || c.ends[e] == BoundaryKind::Free)
                E += 2.0 * kPi * p.sigma * c.nodes[e == 0 ? 0 : c.node_count() - 1].x();
    return E;
}

// Negative Lagrangian of the kappa scheme in X: -E + (kappa nu, Y |X_rho|)^h + (X_rho, Y_rho |X_rho|^{-1}).
inline double kappa_neg_lagrangian(const GeneratingCurve& c, const std::vector<double>& kappa,
                                   const std::vector<Vec2>& Y, const ModelParams& p) {
    const auto wo = weighted_normals(c);
    double s = -kappa_energy(c, kappa, p);
    for (int k = 0; k < c.node_count(); ++k) s += kappa[k] * wo[k].dot(Y[k]);
    for (int e = 0; e < c.elements(); ++e) {
        const int a = c.element_start(e), b = c.element_end(e);
        const Vec2 d = c.nodes[b] - c.nodes[a];
        s += d.dot(Y[b] - Y[a]) / d.norm();
    }
    return s;
}

// Energy of the kappaS schemes with the given quadrature, without the Gaussian term.
inline double kappa_s_energy(const GeneratingCurve& c, const std::vector<double>& ks, const ModelParams& p,
                             const QuadratureRule& rule) {
    double bulk = 0.0, ade = 0.0;
    for (int e = 0; e < c.elements(); ++e) {
        const int a = c.element_start(e), b = c.element_end(e);
        const double L = (c.nodes[b] - c.nodes[a]).norm();
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double s = rule.points[q], wq = rule.weights[q] * L;
            const double x1 = (1 - s) * c.nodes[a].x() + s * c.nodes[b].x();
            const double k = (1 - s) * ks[a] + s * ks[b];
            bulk += wq * x1 * (p.alpha * (k - p.kbar) * (k - p.kbar) + 2.0 * p.lambda);
            ade += wq * x1 * k;
        }
    }
    const double A = 2.0 * kPi * ade - p.M0;
    double E = kPi * bulk + 0.5 * p.beta * A * A;
    if (!c.periodic())
        for (int e = 0; e < 2; ++e)
            if (c.ends[e] == BoundaryKind::Semifree2 || c.ends[e] == BoundaryKind::Free)
                E += 2.0 * kPi * p.sigma * c.nodes[e == 0 ? 0 : c.node_count() - 1].x();
    return E;
}

// -E_S + (x1 kappaS nu, Y |X_rho|)^(h) + (e1, Y |X_rho|) + (x1 X_rho, Y_rho |X_rho|^{-1}).
inline double kappa_s_neg_lagrangian(const GeneratingCurve& c, const std::vector<double>& ks,
                                     const std::vector<Vec2>& Y, const ModelParams& p, const QuadratureRule& rule) {
    double s = -kappa_s_energy(c, ks, p, rule);
    for (int e = 0; e < c.elements(); ++e) {
        const int a = c.element_start(e), b = c.element_end(e);
        const Vec2 d = c.nodes[b] - c.nodes[a];
        const double L = d.norm();
        const Vec2 nu_L = -perp(d);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double t = rule.points[q], wq = rule.weights[q];
            const double x1 = (1 - t) * c.nodes[a].x() + t * c.nodes[b].x();
            const double k = (1 - t) * ks[a] + t * ks[b];
            const Vec2 y = (1 - t) * Y[a] + t * Y[b];
            s += wq * x1 * k * nu_L.dot(y);
        }
        s += 0.5 * L * (Y[a].x() + Y[b].x());
        s += 0.5 * (c.nodes[a].x() + c.nodes[b].x()) * d.dot(Y[b] - Y[a]) / L;
    }
    return s;
}

// ---- sphere ODE -------------------------------------------------------------

// Classical RK4 for R' = -(kbar / R)(2 / R + kbar).
inline double sphere_radius_rk4(double kbar, double R0, double t, double h = 1e-5) {
    auto f = [&](double R) { return -(kbar / R) * (2.0 / R + kbar); };
    const long steps = std::max<long>(1, std::lround(t / h));
    const double dt = t / steps;
    double R = R0;
    for (long i = 0; i < steps; ++i) {
        const double k1 = f(R), k2 = f(R + 0.5 * dt * k1), k3 = f(R + 0.5 * dt * k2), k4 = f(R + dt * k3);
        R += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return R;
}

// ---- small fixtures -----------------------------------------------------------

// Two-element clockwise semicircle (0,1), (1,0), (0,-1).
inline GeneratingCurve two_element_semicircle() {
    return GeneratingCurve::open({Vec2(0, 1), Vec2(1, 0), Vec2(0, -1)}, BoundaryKind::Axis, BoundaryKind::Axis);
}

// Counterclockwise square with vertices on the unit circle about (2,0).
inline GeneratingCurve four_gon() {
    return GeneratingCurve::closed({Vec2(3, 0), Vec2(2, 1), Vec2(1, 0), Vec2(2, -1)});
}

inline GeneratingCurve regular_polygon(int J, Vec2 center = Vec2(2, 0), double radius = 1.0, bool ccw = true) {
    std::vector<Vec2> nodes(J);
    for (int j = 0; j < J; ++j) {
        const double t = 2.0 * kPi * j / J;
        nodes[j] = center + radius * Vec2(std::cos(t), (ccw ? 1.0 : -1.0) * std::sin(t));
    }
    return GeneratingCurve::closed(std::move(nodes));
}

// ---- oracle checks on one random curve ----------------------------------------
// Each returns the largest relative discrepancy found.

inline double relative(double err, double scale) { return err / std::max(1.0, scale); }

// Element length, tangent, normal and length-weighted normal variations.
inline double element_variation_mismatch(Rng& rng, double step = 1e-6) {
    const auto c = random_valid_curve(rng);
    std::vector<Vec2> dir(c.node_count());
    for (auto& d : dir) d = Vec2(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const auto var = element_variations(c, build_element_frames(c), dir);
    GeneratingCurve p = c, m = c;
    for (int k = 0; k < c.node_count(); ++k) {
        p.nodes[k] += step * dir[k];
        m.nodes[k] -= step * dir[k];
    }
    const auto fp = build_element_frames(p), fm = build_element_frames(m);
    double worst = 0.0;
    for (int e = 0; e < c.elements(); ++e) {
        const double dl = (fp[e].length - fm[e].length) / (2 * step);
        const Vec2 dt = (fp[e].tau - fm[e].tau) / (2 * step);
        const Vec2 dn = (fp[e].nu - fm[e].nu) / (2 * step);
        const Vec2 dnl = (fp[e].length * fp[e].nu - fm[e].length * fm[e].nu) / (2 * step);
        worst = std::max(worst, relative(std::abs(dl - var[e].length), std::abs(dl)));
        worst = std::max(worst, relative((dt - var[e].tau).norm(), dt.norm()));
        worst = std::max(worst, relative((dn - var[e].nu).norm(), dn.norm()));
        worst = std::max(worst, relative((dnl - var[e].nu_length).norm(), dnl.norm()));
    }
    return worst;
}

// Variation of the length-weighted averaged vertex normal.
inline double omega_variation_mismatch(Rng& rng, double step = 1e-6) {
    const auto c = random_valid_curve(rng);
    std::vector<Vec2> dir(c.node_count());
    for (auto& d : dir) d = Vec2(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const auto dw = omega_variations(c, build_geometry(c), dir);
    GeneratingCurve p = c, m = c;
    for (int k = 0; k < c.node_count(); ++k) {
        p.nodes[k] += step * dir[k];
        m.nodes[k] -= step * dir[k];
    }
    const auto gp = build_geometry(p), gm = build_geometry(m);
    double worst = 0.0;
    for (int k = 0; k < c.node_count(); ++k) {
        const Vec2 fd = (gp.vertices[k].omega - gm.vertices[k].omega) / (2 * step);
        worst = std::max(worst, relative((fd - dw[k]).norm(), fd.norm()));
    }
    return worst;
}

// Curves for the Lagrangian oracles; without conormal forces the free and
// second semifree ends, whose conormal term the oracle omits, are excluded.
inline GeneratingCurve oracle_curve(Rng& rng, bool allow_conormal_forces) {
    const int J = uniform_int(rng, 5, 30);
    auto kind = [&] {
        static const BoundaryKind plain[] = {BoundaryKind::Clamped, BoundaryKind::Navier, BoundaryKind::Semifree1};
        return allow_conormal_forces ? random_non_axis_kind(rng) : plain[uniform_int(rng, 0, 2)];
    };
    switch (uniform_int(rng, 0, 3)) {
        case 0: return random_closed_curve(rng, J);
        case 1: return random_axis_curve(rng, J);
        case 2: return random_open_curve(rng, J, BoundaryKind::Axis, kind());
        default: return random_open_curve(rng, J, kind(), kind());
    }
}

// Discrepancy between a nodal force and a gradient over the admissible position directions.
inline double force_mismatch(const GeneratingCurve& c, SchemeKind scheme, const std::vector<Vec2>& force,
                             const std::vector<Vec2>& fd) {
    const DofMap d = build_dof_map(c, scheme);
    double err = 0.0, scale = 1.0;
    for (int k = 0; k < c.node_count(); ++k)
        for (int i = 0; i < 2; ++i)
            if (d.x[k][i] >= 0) {
                err = std::max(err, std::abs(force[k][i] - fd[k][i]));
                scale = std::max(scale, std::abs(fd[k][i]));
            }
    return err / scale;
}

inline SchemeState random_fields(Rng& rng, const GeneratingCurve& c, bool zero_on_axis) {
    SchemeState s;
    s.curve = c;
    s.kappa.resize(c.node_count());
    s.Y.resize(c.node_count());
    for (int k = 0; k < c.node_count(); ++k) {
        s.kappa[k] = zero_on_axis && c.is_axis_node(k) ? 0.0 : uniform(rng, -2, 2);
        s.Y[k] = Vec2(uniform(rng, -3, 3), uniform(rng, -3, 3));
    }
    return s;
}

// The explicit force of the kappa scheme plus the implicit costate flux is the
// X-gradient of the negative Lagrangian.
inline double kappa_force_mismatch(Rng& rng) {
    const auto c = oracle_curve(rng, true);
    ModelParams p = random_params(rng);
    p.alphaG = 0.0;
    const SchemeState s = random_fields(rng, c, true);
    const auto g = build_geometry(c);
    auto F = kappa_scheme::explicit_force(s, g, p);
    for (int e = 0; e < c.elements(); ++e) {
        const int a = c.element_start(e), b = c.element_end(e);
        const Vec2 flux = (s.Y[b] - s.Y[a]) / g.elements[e].length;
        F[b] += flux;
        F[a] -= flux;
    }
    const auto fd = fd_gradient(c, [&](const GeneratingCurve& x) { return kappa_neg_lagrangian(x, s.kappa, s.Y, p); });
    return force_mismatch(c, SchemeKind::Kappa, F, fd);
}

// Same identity for the kappaS variants, with the flux weighted by the element mean of x1.
inline double kappa_s_force_mismatch(Rng& rng, bool exact) {
    const QuadratureRule& rule = exact ? exact_rule() : vertex_rule();
    const auto c = oracle_curve(rng, false);
    ModelParams p = random_params(rng);
    p.alphaG = 0.0;
    const SchemeState s = random_fields(rng, c, false);
    const auto g = build_geometry(c);
    auto F = kappa_s_scheme::explicit_force(s, g, p, rule);
    for (int e = 0; e < c.elements(); ++e) {
        const int a = c.element_start(e), b = c.element_end(e);
        const double xbar = 0.5 * (c.nodes[a].x() + c.nodes[b].x());
        const Vec2 flux = xbar * (s.Y[b] - s.Y[a]) / g.elements[e].length;
        F[b] += flux;
        F[a] -= flux;
    }
    const auto fd =
        fd_gradient(c, [&](const GeneratingCurve& x) { return kappa_s_neg_lagrangian(x, s.kappa, s.Y, p, rule); });
    return force_mismatch(c, exact ? SchemeKind::KappaSExact : SchemeKind::KappaSLumped, F, fd);
}

// Norm of the solution of the assembled system with zero right-hand side.
inline double homogeneous_solution_norm(Rng& rng, SchemeKind scheme) {
    const auto c = random_valid_curve(rng);
    const ModelParams p = random_params(rng);
    const BlockSystem sys = assemble(initial_state(c, p, scheme), p, uniform(rng, 1e-5, 1e-2), scheme);
    const auto lu = linsolve::factor(sys.matrix);
    return lu.solve(Eigen::VectorXd::Zero(sys.dofs.size())).first.norm();
}

}  // namespace axiwill::testing_support
