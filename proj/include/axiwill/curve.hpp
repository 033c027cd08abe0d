#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace axiwill {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Clockwise rotation: (a, b) -> (b, -a).
inline Vec2 perp(const Vec2& a) { return Vec2(a.y(), -a.x()); }

enum class Topology { Periodic, Interval };

enum class BoundaryKind { Axis, Clamped, Navier, Semifree1, Semifree2, Free };

const char* to_string(BoundaryKind kind);
BoundaryKind boundary_kind_from_string(const std::string& name);

// Endpoints whose conormal is an unknown: Navier, both semifree classes, free.
inline bool has_conormal_unknown(BoundaryKind k) {
    return k == BoundaryKind::Navier || k == BoundaryKind::Semifree1 || k == BoundaryKind::Semifree2 ||
           k == BoundaryKind::Free;
}

// Polygonal generating curve in the half plane x1 >= 0. Interval curves have
// J+1 nodes q_0..q_J; periodic curves have J nodes with q_J identified with q_0.
struct GeneratingCurve {
    std::vector<Vec2> nodes;
    Topology topology = Topology::Interval;
    std::array<BoundaryKind, 2> ends{BoundaryKind::Free, BoundaryKind::Free};

    static GeneratingCurve closed(std::vector<Vec2> nodes);
    static GeneratingCurve open(std::vector<Vec2> nodes, BoundaryKind left, BoundaryKind right);

    bool periodic() const { return topology == Topology::Periodic; }
    int node_count() const { return static_cast<int>(nodes.size()); }
    int elements() const { return periodic() ? node_count() : node_count() - 1; }

    int element_start(int e) const { return e; }
    int element_end(int e) const { return periodic() ? (e + 1) % node_count() : e + 1; }
    // Element to the left / right of a node, or -1 at an interval endpoint.
    int left_element(int k) const;
    int right_element(int k) const;

    // 0 or 1 for the interval endpoints q_0 and q_J; empty otherwise.
    std::optional<int> endpoint_index(int k) const;
    std::optional<BoundaryKind> boundary_kind(int k) const;
    bool is_axis_node(int k) const;
    bool has_axis_endpoint() const;
    // Closed surface: periodic curve or both endpoints on the axis.
    bool encloses_volume() const;
};

struct ElementFrame {
    Vec2 tau;
    Vec2 nu;
    double length = 0.0;
};

struct VertexFrame {
    Vec2 omega;      // lumped projection of the element normals
    Vec2 unit;       // omega / |omega|
    Mat2 projection; // identity at non-axis endpoints, unit * unit^T elsewhere
    double weight = 0.0;  // lumped mass: half the adjacent element lengths
};

struct CurveGeometry {
    std::vector<ElementFrame> elements;
    std::vector<VertexFrame> vertices;
};

std::vector<ElementFrame> build_element_frames(const GeneratingCurve& curve);
std::vector<VertexFrame> build_vertex_frames(const GeneratingCurve& curve, const std::vector<ElementFrame>& frames);
CurveGeometry build_geometry(const GeneratingCurve& curve);

std::vector<double> lumped_weights(const GeneratingCurve& curve, const std::vector<ElementFrame>& frames);

// Per-vertex (left limit, right limit) values of a piecewise continuous function.
struct TwoSided {
    double left = 0.0;
    double right = 0.0;
};
std::vector<TwoSided> continuous_values(const std::vector<double>& values);

// (f, g |X_rho|)^h with the mass-lumping rule; one-sided limits are taken from
// the element being integrated.
double lumped_inner(const GeneratingCurve& curve, const std::vector<TwoSided>& f, const std::vector<TwoSided>& g,
                    const std::vector<ElementFrame>& frames);

// First variations in a nodal direction chi, per element, in chord form:
// d|chord| = tau.dchi, dtau = (dchi.nu / L) nu, dnu = -(dchi.nu / L) tau,
// d(nu L) = -dchi^perp where dchi = chi(end) - chi(start).
struct ElementVariation {
    double length = 0.0;
    Vec2 tau;
    Vec2 nu;
    Vec2 nu_length;
};
std::vector<ElementVariation> element_variations(const GeneratingCurve& curve, const std::vector<ElementFrame>& frames,
                                                 const std::vector<Vec2>& direction);
// Variation of the averaged vertex normal via its lumped defining identity.
std::vector<Vec2> omega_variations(const GeneratingCurve& curve, const CurveGeometry& geometry,
                                   const std::vector<Vec2>& direction);

struct ValidationReport {
    bool axis_exact = true;             // axis endpoints have x1 == 0 exactly
    bool positive = true;               // x1 > 0 at all other nodes
    bool elements_nondegenerate = true; // consecutive nodes distinct
    bool next_nearest_distinct = true;  // omega well defined everywhere
    int span_dimension = 0;             // dim span{v_j} over interior vertices
    bool straight_line = false;         // all nodes collinear
    std::vector<std::string> messages;

    bool span_ok() const { return span_dimension == 2; }
    bool ok() const {
        return axis_exact && positive && elements_nondegenerate && next_nearest_distinct && span_ok();
    }
};
ValidationReport validate(const GeneratingCurve& curve);

// Signed area of the cross-section (positive for counterclockwise); interval
// curves are closed by the straight segment joining their endpoints.
double signed_cross_section_area(const GeneratingCurve& curve);

}  // namespace axiwill
