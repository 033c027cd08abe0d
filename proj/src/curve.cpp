#include "axiwill/curve.hpp"

#include "axiwill/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace axiwill {

const char* to_string(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::Axis: return "axis";
        case BoundaryKind::Clamped: return "clamped";
        case BoundaryKind::Navier: return "navier";
        case BoundaryKind::Semifree1: return "semifree1";
        case BoundaryKind::Semifree2: return "semifree2";
        case BoundaryKind::Free: return "free";
    }
    return "unknown";
}

BoundaryKind boundary_kind_from_string(const std::string& name) {
    for (auto k : {BoundaryKind::Axis, BoundaryKind::Clamped, BoundaryKind::Navier, BoundaryKind::Semifree1,
                   BoundaryKind::Semifree2, BoundaryKind::Free}) {
        if (name == to_string(k)) return k;
    }
    fail(ErrorKind::InvalidConfig, "unknown boundary class '" + name + "'");
}

GeneratingCurve GeneratingCurve::closed(std::vector<Vec2> nodes) {
    GeneratingCurve c;
    c.nodes = std::move(nodes);
    c.topology = Topology::Periodic;
    return c;
}

GeneratingCurve GeneratingCurve::open(std::vector<Vec2> nodes, BoundaryKind left, BoundaryKind right) {
    GeneratingCurve c;
    c.nodes = std::move(nodes);
    c.topology = Topology::Interval;
    c.ends = {left, right};
    return c;
}

int GeneratingCurve::left_element(int k) const {
    if (periodic()) return (k + node_count() - 1) % node_count();
    return k == 0 ? -1 : k - 1;
}

int GeneratingCurve::right_element(int k) const {
    if (periodic()) return k;
    return k == node_count() - 1 ? -1 : k;
}

std::optional<int> GeneratingCurve::endpoint_index(int k) const {
    if (periodic()) return std::nullopt;
    if (k == 0) return 0;
    if (k == node_count() - 1) return 1;
    return std::nullopt;
}

std::optional<BoundaryKind> GeneratingCurve::boundary_kind(int k) const {
    auto p = endpoint_index(k);
    if (!p) return std::nullopt;
    return ends[*p];
}

bool GeneratingCurve::is_axis_node(int k) const {
    auto b = boundary_kind(k);
    return b && *b == BoundaryKind::Axis;
}

bool GeneratingCurve::has_axis_endpoint() const {
    return !periodic() && (ends[0] == BoundaryKind::Axis || ends[1] == BoundaryKind::Axis);
}

bool GeneratingCurve::encloses_volume() const {
    return periodic() || (ends[0] == BoundaryKind::Axis && ends[1] == BoundaryKind::Axis);
}

std::vector<ElementFrame> build_element_frames(const GeneratingCurve& curve) {
    const int J = curve.elements();
    if (J < 1) fail(ErrorKind::DegenerateElement, "curve has no elements");
    std::vector<ElementFrame> frames(J);
    for (int e = 0; e < J; ++e) {
        const Vec2 d = curve.nodes[curve.element_end(e)] - curve.nodes[curve.element_start(e)];
        const double L = d.norm();
        if (!(L > 0.0) || !std::isfinite(L)) {
            std::ostringstream os;
            os << "element " << e << " has zero length";
            fail(ErrorKind::DegenerateElement, os.str());
        }
        frames[e].length = L;
        frames[e].tau = d / L;
        frames[e].nu = -perp(frames[e].tau);
    }
    return frames;
}

std::vector<VertexFrame> build_vertex_frames(const GeneratingCurve& curve, const std::vector<ElementFrame>& frames) {
    const int n = curve.node_count();
    std::vector<VertexFrame> out(n);
    for (int k = 0; k < n; ++k) {
        const int l = curve.left_element(k);
        const int r = curve.right_element(k);
        VertexFrame& v = out[k];
        if (l >= 0 && r >= 0) {
            const Vec2 chord = curve.nodes[curve.element_end(r)] - curve.nodes[curve.element_start(l)];
            v.omega = -perp(chord) / (frames[l].length + frames[r].length);
            v.weight = 0.5 * (frames[l].length + frames[r].length);
        } else {
            const int e = l >= 0 ? l : r;
            v.omega = frames[e].nu;
            v.weight = 0.5 * frames[e].length;
        }
        const double norm = v.omega.norm();
        if (!(norm > 1e-14)) {
            std::ostringstream os;
            os << "averaged normal vanishes at vertex " << k << " (next-nearest nodes coincide)";
            fail(ErrorKind::ZeroAveragedNormal, os.str());
        }
        v.unit = v.omega / norm;
        const auto b = curve.boundary_kind(k);
        if (b && *b != BoundaryKind::Axis)
            v.projection = Mat2::Identity();
        else
            v.projection = v.unit * v.unit.transpose();
    }
    return out;
}

CurveGeometry build_geometry(const GeneratingCurve& curve) {
    CurveGeometry g;
    g.elements = build_element_frames(curve);
    g.vertices = build_vertex_frames(curve, g.elements);
    return g;
}

std::vector<double> lumped_weights(const GeneratingCurve& curve, const std::vector<ElementFrame>& frames) {
    std::vector<double> w(curve.node_count(), 0.0);
    for (int e = 0; e < curve.elements(); ++e) {
        w[curve.element_start(e)] += 0.5 * frames[e].length;
        w[curve.element_end(e)] += 0.5 * frames[e].length;
    }
    return w;
}

std::vector<TwoSided> continuous_values(const std::vector<double>& values) {
    std::vector<TwoSided> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = {values[i], values[i]};
    return out;
}

double lumped_inner(const GeneratingCurve& curve, const std::vector<TwoSided>& f, const std::vector<TwoSided>& g,
                    const std::vector<ElementFrame>& frames) {
    if (static_cast<int>(f.size()) != curve.node_count() || static_cast<int>(g.size()) != curve.node_count())
        fail(ErrorKind::DimensionMismatch, "lumped_inner: value arrays must have one entry per node");
    double sum = 0.0;
    for (int e = 0; e < curve.elements(); ++e) {
        const int a = curve.element_start(e);
        const int b = curve.element_end(e);
        sum += 0.5 * frames[e].length * (f[b].left * g[b].left + f[a].right * g[a].right);
    }
    return sum;
}

std::vector<ElementVariation> element_variations(const GeneratingCurve& curve, const std::vector<ElementFrame>& frames,
                                                 const std::vector<Vec2>& direction) {
    std::vector<ElementVariation> out(curve.elements());
    for (int e = 0; e < curve.elements(); ++e) {
        const Vec2 dchi = direction[curve.element_end(e)] - direction[curve.element_start(e)];
        const ElementFrame& f = frames[e];
        const double normal_rate = dchi.dot(f.nu) / f.length;
        out[e].length = f.tau.dot(dchi);
        out[e].tau = normal_rate * f.nu;
        out[e].nu = -normal_rate * f.tau;
        out[e].nu_length = -perp(dchi);
    }
    return out;
}

std::vector<Vec2> omega_variations(const GeneratingCurve& curve, const CurveGeometry& geometry,
                                   const std::vector<Vec2>& direction) {
    std::vector<Vec2> acc(curve.node_count(), Vec2::Zero());
    for (int e = 0; e < curve.elements(); ++e) {
        const Vec2 dchi = direction[curve.element_end(e)] - direction[curve.element_start(e)];
        const ElementFrame& f = geometry.elements[e];
        for (int k : {curve.element_start(e), curve.element_end(e)}) {
            acc[k] += 0.5 * (-(f.nu.dot(dchi)) * f.tau - f.tau.dot(dchi) * (geometry.vertices[k].omega - f.nu));
        }
    }
    for (int k = 0; k < curve.node_count(); ++k) acc[k] /= geometry.vertices[k].weight;
    return acc;
}

ValidationReport validate(const GeneratingCurve& curve) {
    ValidationReport rep;
    const int n = curve.node_count();
    for (int k = 0; k < n; ++k) {
        const double x1 = curve.nodes[k].x();
        if (curve.is_axis_node(k)) {
            if (x1 != 0.0) {
                rep.axis_exact = false;
                rep.messages.push_back("axis endpoint " + std::to_string(k) + " is not exactly on the axis");
            }
        } else if (!(x1 > 0.0)) {
            rep.positive = false;
            rep.messages.push_back("node " + std::to_string(k) + " has x1 <= 0");
        }
    }
    for (int e = 0; e < curve.elements(); ++e) {
        if (curve.nodes[curve.element_start(e)] == curve.nodes[curve.element_end(e)]) {
            rep.elements_nondegenerate = false;
            rep.messages.push_back("element " + std::to_string(e) + " has coincident nodes");
        }
    }
    if (!rep.elements_nondegenerate) return rep;

    std::vector<ElementFrame> frames = build_element_frames(curve);
    Mat2 gram = Mat2::Zero();
    for (int k = 0; k < n; ++k) {
        const int l = curve.left_element(k);
        const int r = curve.right_element(k);
        if (l < 0 || r < 0) continue;
        const Vec2 chord = curve.nodes[curve.element_end(r)] - curve.nodes[curve.element_start(l)];
        if (chord.norm() <= 1e-14) {
            rep.next_nearest_distinct = false;
            rep.messages.push_back("next-nearest nodes around vertex " + std::to_string(k) + " coincide");
            continue;
        }
        const Vec2 v = -perp(chord).normalized();
        gram += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat2> eig(gram);
    const double big = eig.eigenvalues().maxCoeff();
    const double small = eig.eigenvalues().minCoeff();
    rep.span_dimension = big <= 0.0 ? 0 : (small > 1e-12 * big ? 2 : 1);
    if (!rep.span_ok()) rep.messages.push_back("vertex normals do not span the plane");

    // Collinearity of all nodes relative to the first chord.
    const Vec2 base = curve.nodes.front();
    const Vec2 dir = frames.front().tau;
    double deviation = 0.0, extent = 0.0;
    for (const auto& p : curve.nodes) {
        deviation = std::max(deviation, std::abs(perp(dir).dot(p - base)));
        extent = std::max(extent, (p - base).norm());
    }
    rep.straight_line = deviation <= 1e-12 * std::max(extent, 1.0);
    if (rep.straight_line) rep.messages.push_back("curve is a straight line");
    return rep;
}

double signed_cross_section_area(const GeneratingCurve& curve) {
    double s = 0.0;
    const int n = curve.node_count();
    for (int k = 0; k < n; ++k) {
        const Vec2& a = curve.nodes[k];
        const Vec2& b = curve.nodes[(k + 1) % n];
        s += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * s;
}

}  // namespace axiwill
