#include "axiwill/conserved.hpp"

#include "axiwill/errors.hpp"
#include "axiwill/scheme_kappa.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace axiwill {

const char* to_string(ConservationMode mode) {
    switch (mode) {
        case ConservationMode::None: return "none";
        case ConservationMode::Area: return "area";
        case ConservationMode::Volume: return "volume";
        case ConservationMode::AreaAndVolume: return "area_and_volume";
    }
    return "unknown";
}

ConservationMode conservation_mode_from_string(const std::string& name) {
    for (auto m : {ConservationMode::None, ConservationMode::Area, ConservationMode::Volume,
                   ConservationMode::AreaAndVolume})
        if (name == to_string(m)) return m;
    fail(ErrorKind::InvalidConfig, "unknown conservation mode '" + name + "'");
}

namespace {

GeneratingCurve positions(const BlockSystem& sys, const GeneratingCurve& curve, const Eigen::VectorXd& z) {
    GeneratingCurve out = curve;
    for (int k = 0; k < curve.node_count(); ++k)
        for (int i = 0; i < 2; ++i)
            if (sys.dofs.x[k][i] >= 0) out.nodes[k][i] += z[sys.dofs.x[k][i]];
    return out;
}

double directional(const std::vector<Vec2>& gradient, const BlockSystem& sys, const Eigen::VectorXd& z) {
    double s = 0.0;
    for (size_t k = 0; k < gradient.size(); ++k)
        for (int i = 0; i < 2; ++i)
            if (sys.dofs.x[k][i] >= 0) s += gradient[k][i] * z[sys.dofs.x[k][i]];
    return s;
}

Eigen::VectorXd multiplier_column(const std::vector<Vec2>& gradient, const BlockSystem& sys) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(sys.dofs.size());
    for (size_t k = 0; k < gradient.size(); ++k)
        for (int i = 0; i < 2; ++i)
            if (sys.dofs.x[k][i] >= 0) col[sys.dofs.x[k][i]] = -gradient[k][i];
    return col;
}

}  // namespace

ConservedStepResult conserved_step(const SchemeState& state, const ModelParams& params, double dt,
                                   ConservationMode mode, const NewtonConfig& cfg, double target_area,
                                   double target_volume) {
    const GeneratingCurve& curve = state.curve;
    if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1)
        fail(ErrorKind::InvalidConfig, "Newton tolerance must be positive and max iterations at least one");
    if (!curve.periodic())
        for (auto kind : curve.ends)
            if (has_conormal_unknown(kind) && mode != ConservationMode::None)
                fail(ErrorKind::InvalidConfig, "conserved flows require no endpoint with a conormal unknown");
    const bool use_area = mode == ConservationMode::Area || mode == ConservationMode::AreaAndVolume;
    const bool use_volume = mode == ConservationMode::Volume || mode == ConservationMode::AreaAndVolume;
    if (use_volume && !curve.encloses_volume()) fail(ErrorKind::NotClosed, "volume conservation needs a closed surface");

    const BlockSystem sys = kappa_scheme::assemble_step(state, params, dt);
    const auto lu = linsolve::factor(sys.matrix);
    ConservedStepResult result;
    auto [z0, report] = lu.solve(sys.rhs);
    result.report.solve = report;

    Eigen::VectorXd s = Eigen::VectorXd::Zero(sys.dofs.size());
    Eigen::VectorXd q = Eigen::VectorXd::Zero(sys.dofs.size());
    if (use_area) s = lu.solve(multiplier_column(area_gradient(curve), sys)).first;
    if (use_volume) q = lu.solve(multiplier_column(volume_gradient(curve), sys)).first;

    double lA = use_area ? cfg.initial_lambda_A : 0.0;
    double lV = use_volume ? cfg.initial_lambda_V : 0.0;
    int iterations = 0;
    while (mode != ConservationMode::None) {
        const Eigen::VectorXd z = z0 + lA * s + lV * q;
        const GeneratingCurve trial = positions(sys, curve, z);
        const double rA = use_area ? surface_area(trial) - target_area : 0.0;
        const double rV = use_volume ? enclosed_volume(trial) - target_volume : 0.0;
        if (!std::isfinite(rA) || !std::isfinite(rV)) fail(ErrorKind::NewtonDivergence, "non-finite constraint residual");
        if (std::abs(rA) <= cfg.tolerance && std::abs(rV) <= cfg.tolerance) break;
        if (iterations >= cfg.max_iterations) {
            std::ostringstream os;
            os << "Newton iteration did not converge in " << cfg.max_iterations << " iterations (area residual " << rA
               << ", volume residual " << rV << ")";
            fail(ErrorKind::NewtonDivergence, os.str());
        }
        ++iterations;
        if (use_area && use_volume) {
            const auto gA = area_gradient(trial);
            const auto gV = volume_gradient(trial);
            Eigen::Matrix2d jac;
            jac << directional(gA, sys, s), directional(gA, sys, q), directional(gV, sys, s), directional(gV, sys, q);
            Eigen::JacobiSVD<Eigen::Matrix2d> svd(jac);
            const auto sv = svd.singularValues();
            if (!(sv[0] > 0.0) || !(sv[1] > cfg.jacobian_rcond_min * sv[0])) {
                std::ostringstream os;
                os << "constraint Jacobian singular (singular values " << sv[0] << ", " << sv[1] << ")";
                fail(ErrorKind::SingularConstraintJacobian, os.str());
            }
            const Eigen::Vector2d delta = jac.fullPivLu().solve(Eigen::Vector2d(rA, rV));
            lA -= delta[0];
            lV -= delta[1];
        } else if (use_area) {
            const double dj = directional(area_gradient(trial), sys, s);
            if (!(std::abs(dj) > 0.0)) fail(ErrorKind::SingularConstraintJacobian, "area constraint derivative vanishes");
            lA -= rA / dj;
        } else {
            const double dj = directional(volume_gradient(trial), sys, q);
            if (!(std::abs(dj) > 0.0)) fail(ErrorKind::SingularConstraintJacobian, "volume constraint derivative vanishes");
            lV -= rV / dj;
        }
    }

    const Eigen::VectorXd z = z0 + lA * s + lV * q;
    result.state = unpack_solution(sys, state, z);
    result.report.side_residual = recover_conormals(sys, state, result.state);
    result.lambda_A = lA;
    result.lambda_V = lV;
    result.iterations = iterations;
    return result;
}

}  // namespace axiwill
