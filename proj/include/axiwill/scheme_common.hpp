#pragma once

#include "axiwill/curve.hpp"
#include "axiwill/functionals.hpp"
#include "axiwill/linsolve.hpp"

#include <array>
#include <vector>

namespace axiwill {

// One time level. `kappa` holds kappa for the Kappa scheme and kappaS for the
// kappaS schemes; `Y` the corresponding costate. Conormals are stored per
// interval endpoint and are meaningful only at endpoints with a conormal unknown.
struct SchemeState {
    GeneratingCurve curve;
    std::vector<double> kappa;
    std::vector<Vec2> Y;
    std::array<Vec2, 2> conormal{Vec2::Zero(), Vec2::Zero()};
    double time = 0.0;
};

// Reduced degree-of-freedom numbering after eliminating constrained components.
// Unknowns are stacked as (Y, dX, kappa); test functions of the side
// constraint, the position equation and the curvature equation share the
// numbering of Y, dX and kappa respectively. -1 marks an eliminated entry.
struct DofMap {
    std::vector<std::array<int, 2>> y;
    std::vector<std::array<int, 2>> x;
    std::vector<int> kappa;
    int ny = 0;
    int nx = 0;
    int nk = 0;

    int size() const { return ny + nx + nk; }
    int y_offset() const { return 0; }
    int x_offset() const { return ny; }
    int kappa_offset() const { return ny + nx; }
};

DofMap build_dof_map(const GeneratingCurve& curve, SchemeKind scheme);

struct BlockSystem {
    SchemeKind scheme = SchemeKind::Kappa;
    linsolve::SparseMatrix matrix{0};
    Eigen::VectorXd rhs;
    DofMap dofs;
    CurveGeometry geometry;           // geometry of the current level
    std::vector<Vec2> fixed_Y;        // prescribed costate at endpoints with a conormal unknown
    ModelParams params;
    double dt = 0.0;
    const QuadratureRule* rule = nullptr;  // rule for the switchable inner products
};

struct StepReport {
    linsolve::SolveReport solve;
    double side_residual = 0.0;  // relative residual of the side constraint over the full test space
};

// Maps a reduced solution vector back to nodal fields (conormals untouched).
SchemeState unpack_solution(const BlockSystem& system, const SchemeState& current, const Eigen::VectorXd& z);

// Fills in the conormals of `next` from the side constraint tested with the
// endpoint basis functions and returns the relative residual of the side
// constraint over the full test space.
double recover_conormals(const BlockSystem& system, const SchemeState& current, SchemeState& next);

// Solves an assembled system and recovers conormals.
SchemeState solve_step(const BlockSystem& system, const SchemeState& current, StepReport* report = nullptr);

// Assemble for the given scheme (dispatches to the scheme modules).
BlockSystem assemble(const SchemeState& state, const ModelParams& params, double dt, SchemeKind scheme);

// Full step: assemble, factor, solve, recover.
SchemeState advance(const SchemeState& state, const ModelParams& params, double dt, SchemeKind scheme,
                    StepReport* report = nullptr);

// Initial data for the given scheme.
SchemeState initial_state(const GeneratingCurve& curve, const ModelParams& params, SchemeKind scheme);

// Throws AssemblyDomainError when a non-axis node is not strictly inside the half plane.
void check_assembly_domain(const GeneratingCurve& curve);

// Helper: nodal vector curvature from the lumped defining system with the
// true endpoint conormals, used by both initializations.
std::vector<Vec2> initial_vector_curvature(const GeneratingCurve& curve, const CurveGeometry& geometry);

}  // namespace axiwill
