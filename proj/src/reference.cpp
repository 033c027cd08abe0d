#include "axiwill/reference.hpp"

#include "axiwill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace axiwill {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sphere_radius(const SphereReference& ref, double t) {
    if (!(ref.R0 > 0.0)) fail(ErrorKind::RootBracketFailure, "sphere reference needs R0 > 0");
    if (!(t >= 0.0)) fail(ErrorKind::RootBracketFailure, "sphere reference needs t >= 0");
    const double kb = ref.kbar;
    if (kb == 0.0 || t == 0.0) return ref.R0;
    const double z0 = ref.R0 + 2.0 / kb;
    if (z0 == 0.0) return ref.R0;  // stationary radius -2 / kbar
    auto f = [&](double z) {
        return 0.5 * (z * z - z0 * z0) - 4.0 / kb * (z - z0) + 4.0 / (kb * kb) * std::log(z / z0) + kb * kb * t;
    };
    auto df = [&](double z) {
        const double r = z - 2.0 / kb;
        return r * r / z;
    };
    // z moves monotonically from z0 towards 0 (kbar < 0) or towards 2 / kbar,
    // where the sphere vanishes (kbar > 0).
    const double limit = kb < 0.0 ? 0.0 : 2.0 / kb;
    double lo = std::min(z0, limit), hi = std::max(z0, limit);
    // Keep the open end off the singular point of the logarithm.
    if (limit == 0.0) {
        if (lo == 0.0) lo = z0 * 1e-300;
        if (hi == 0.0) hi = z0 * 1e-300;
    }
    double flo = f(lo), fhi = f(hi);
    if (!(std::isfinite(flo) && std::isfinite(fhi)) || flo * fhi > 0.0) {
        std::ostringstream os;
        os << "no root of the sphere relation in [" << lo << ", " << hi << "] at t = " << t;
        fail(ErrorKind::RootBracketFailure, os.str());
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        const double fz = f(z);
        if (fz == 0.0) break;
        if ((fz < 0.0) == (flo < 0.0)) {
            lo = z;
            flo = fz;
        } else {
            hi = z;
        }
        double next = z - fz / df(z);
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - z);
        z = next;
        if (step <= 1e-15 * std::max(1.0, std::abs(z)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z - 2.0 / kb;
}

ErrorNorms error_norms(const std::vector<Snapshot>& history, const SphereReference& ref) {
    ErrorNorms out;
    for (size_t m = 1; m < history.size(); ++m) {
        const GeneratingCurve& c = history[m].curve;
        const double R = sphere_radius(ref, history[m].time);
        const auto frames = build_element_frames(c);
        const auto w = lumped_weights(c, frames);
        double l2 = 0.0;
        for (int k = 0; k < c.node_count(); ++k) {
            const double d = std::abs(c.nodes[k].norm() - R);
            out.linf = std::max(out.linf, d);
            l2 += w[k] * d * d;
        }
        out.linf_l2 = std::max(out.linf_l2, std::sqrt(l2));
    }
    return out;
}

double eoc(double error_coarse, double error_fine, double h_coarse, double h_fine) {
    return std::log(error_coarse / error_fine) / std::log(h_coarse / h_fine);
}

double max_edge_length(const GeneratingCurve& curve) {
    double h = 0.0;
    for (int e = 0; e < curve.elements(); ++e)
        h = std::max(h, (curve.nodes[curve.element_end(e)] - curve.nodes[curve.element_start(e)]).norm());
    return h;
}

namespace {

using Param = std::function<Vec2(double)>;

// Samples a parametric curve on [0, 1] at `count` points equidistributed in arc
// length (closed curves omit the point at 1).
std::vector<Vec2> equidistribute(const Param& f, int count, bool closed) {
    const int fine = std::max(2000, 200 * count);
    std::vector<double> s(fine + 1, 0.0);
    Vec2 prev = f(0.0);
    for (int i = 1; i <= fine; ++i) {
        const Vec2 p = f(double(i) / fine);
        s[i] = s[i - 1] + (p - prev).norm();
        prev = p;
    }
    const double total = s.back();
    const int intervals = closed ? count : count - 1;
    std::vector<Vec2> out;
    out.reserve(count);
    int idx = 0;
    for (int j = 0; j < count; ++j) {
        const double target = total * j / intervals;
        while (idx < fine - 1 && s[idx + 1] < target) ++idx;
        const double seg = s[idx + 1] - s[idx];
        const double frac = seg > 0.0 ? std::clamp((target - s[idx]) / seg, 0.0, 1.0) : 0.0;
        out.push_back(f((idx + frac) / fine));
    }
    if (!closed) out.back() = f(1.0);
    return out;
}

struct Reader {
    const std::string& id;
    PresetParams values;

    double get(const std::string& key) const { return values.at(key); }
    int count(const std::string& key, int minimum) const {
        const double v = get(key);
        if (v != std::floor(v) || v < minimum) bad(key + " must be an integer >= " + std::to_string(minimum));
        return static_cast<int>(v);
    }
    double positive(const std::string& key) const {
        const double v = get(key);
        if (!(v > 0.0)) bad(key + " must be positive");
        return v;
    }
    bool flag(const std::string& key) const { return get(key) != 0.0; }
    [[noreturn]] void bad(const std::string& why) const {
        fail(ErrorKind::InvalidPresetParams, "preset '" + id + "': " + why);
    }
};

std::vector<Vec2> reversed(std::vector<Vec2> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = {
        {"perturbed_semicircle", "unit semicircle with cosine-perturbed vertex angles, both ends on the axis",
         {{"J", 64}, {"amplitude", 0.1}}},
        {"semicircle", "equidistributed semicircle of given radius, both ends on the axis, clockwise",
         {{"J", 64}, {"radius", 1.0}}},
        {"circle", "regular polygon inscribed in a circle (periodic)",
         {{"J", 64}, {"center_x", 2.0}, {"center_y", 0.0}, {"radius", 1.0}, {"clockwise", 1}}},
        {"cigar", "vertical capsule: rectangle with semicircular caps (periodic)",
         {{"J", 128}, {"center_x", 3.0}, {"center_y", 0.0}, {"half_width", 1.0}, {"half_height", 3.0},
          {"clockwise", 1}}},
        {"two_circle", "unit circle at sqrt(2) e1 traced together with an internally tangent small circle",
         {{"J", 512}, {"small_radius", 0.1}, {"side", 1}, {"clockwise", 0}}},
        {"lemniscate", "asymmetric figure-eight with lobes along e1 (turning number 0)",
         {{"J", 1024}, {"center_x", 2.5}, {"scale", 1.5}, {"asymmetry", 0.25}, {"rotate", 0}}},
        {"lemniscate_two_circles", "symmetric figure-eight with a circle inscribed in each lobe",
         {{"J", 1024}, {"center_x", 2.5}, {"scale", 1.5}, {"circle_radius", 0.3}}},
        {"flat_disc", "rounded-rectangle disc profile, axis to axis, clockwise",
         {{"J", 128}, {"width", 5.0}, {"height", 1.0}}},
        {"sphere_cap", "spherical cap from the axis down to a polar angle, axis then navier",
         {{"J", 64}, {"radius", 1.0}, {"polar_angle", 2.0 * kPi / 3.0}}},
        {"cylinder", "vertical segment traversed top to bottom, navier at both ends",
         {{"J", 64}, {"radius", 1.0}, {"height", 2.0}}},
        {"dumbbell", "cut cylinder with a cosine neck, top to bottom, navier at both ends",
         {{"J", 64}, {"end_radius", 1.0}, {"neck_radius", 0.5}, {"height", 2.0}}},
        {"torus_cap", "upper arc of a torus tube from an inner start angle to the outer equator, clamped then free",
         {{"J", 64}, {"center_x", 2.0}, {"radius", 1.0}, {"start_angle", kPi / 6.0}}},
        {"straight_line", "horizontal segment left to right, clamped at both ends",
         {{"J", 16}, {"x_start", 1.0}, {"x_end", 3.0}, {"height", 0.0}}},
    };
    return catalog;
}

GeneratingCurve make_preset(const std::string& id, const PresetParams& params) {
    const auto& catalog = preset_catalog();
    auto it = std::find_if(catalog.begin(), catalog.end(), [&](const PresetInfo& p) { return p.id == id; });
    if (it == catalog.end()) fail(ErrorKind::InvalidPresetParams, "unknown preset '" + id + "'");
    Reader r{id, it->defaults};
    for (const auto& [key, value] : params) {
        if (!r.values.count(key)) r.bad("unknown parameter '" + key + "'");
        if (!std::isfinite(value)) r.bad("parameter '" + key + "' must be finite");
        r.values[key] = value;
    }

    if (id == "perturbed_semicircle" || id == "semicircle") {
        const int J = r.count("J", 2);
        const double amp = id == "semicircle" ? 0.0 : r.get("amplitude");
        const double R = id == "semicircle" ? r.positive("radius") : 1.0;
        std::vector<Vec2> nodes(J + 1);
        for (int j = 0; j <= J; ++j) {
            const double phi = (0.5 - double(j) / J) * kPi;
            const double theta = phi + amp * std::cos(phi);
            nodes[j] = R * Vec2(std::cos(theta), std::sin(theta));
        }
        nodes.front().x() = 0.0;
        nodes.back().x() = 0.0;
        nodes.front().y() = R;
        nodes.back().y() = -R;
        return GeneratingCurve::open(std::move(nodes), BoundaryKind::Axis, BoundaryKind::Axis);
    }
    if (id == "circle") {
        const int J = r.count("J", 3);
        const double R = r.positive("radius");
        const Vec2 c(r.get("center_x"), r.get("center_y"));
        if (!(c.x() > R)) r.bad("circle must stay in the right half plane");
        const double sgn = r.flag("clockwise") ? -1.0 : 1.0;
        std::vector<Vec2> nodes(J);
        for (int j = 0; j < J; ++j) {
            const double t = 2.0 * kPi * j / J;
            nodes[j] = c + R * Vec2(std::cos(t), sgn * std::sin(t));
        }
        return GeneratingCurve::closed(std::move(nodes));
    }
    if (id == "cigar") {
        const int J = r.count("J", 8);
        const double hw = r.positive("half_width"), hh = r.positive("half_height");
        if (!(hh >= hw)) r.bad("half_height must be at least half_width");
        const Vec2 c(r.get("center_x"), r.get("center_y"));
        if (!(c.x() > hw)) r.bad("cigar must stay in the right half plane");
        const double straight = hh - hw;
        const double total = 4.0 * straight + 2.0 * kPi * hw;
        // counterclockwise from the rightmost point of the lower straight part
        auto f = [=](double u) -> Vec2 {
            double s = u * total;
            if (s < 2.0 * straight) return c + Vec2(hw, -straight + s);
            s -= 2.0 * straight;
            if (s < kPi * hw) {
                const double a = s / hw;
                return c + Vec2(0.0, straight) + hw * Vec2(std::cos(a), std::sin(a));
            }
            s -= kPi * hw;
            if (s < 2.0 * straight) return c + Vec2(-hw, straight - s);
            s -= 2.0 * straight;
            const double a = kPi + s / hw;
            return c + Vec2(0.0, -straight) + hw * Vec2(std::cos(a), std::sin(a));
        };
        auto nodes = equidistribute(f, J, true);
        if (r.flag("clockwise")) nodes = reversed(std::move(nodes));
        return GeneratingCurve::closed(std::move(nodes));
    }
    if (id == "two_circle") {
        const int J = r.count("J", 8);
        const double rs = r.positive("small_radius");
        if (!(rs < 1.0)) r.bad("small_radius must be below 1");
        const double side = r.get("side");
        if (side != 1.0 && side != -1.0) r.bad("side must be +1 (right) or -1 (left)");
        const double cx = std::sqrt(2.0);
        const Vec2 big(cx, 0.0), small(cx + side * (1.0 - rs), 0.0);
        const double start = side > 0 ? 0.0 : kPi;  // common tangency point
        const double total = 2.0 * kPi * (1.0 + rs);
        auto f = [=](double u) -> Vec2 {
            const double s = u * total;
            if (s < 2.0 * kPi) return big + Vec2(std::cos(start + s), std::sin(start + s));
            const double a = start + (s - 2.0 * kPi) / rs;
            return small + rs * Vec2(std::cos(a), std::sin(a));
        };
        auto nodes = equidistribute(f, J, true);
        if (r.flag("clockwise")) nodes = reversed(std::move(nodes));
        return GeneratingCurve::closed(std::move(nodes));
    }
    if (id == "lemniscate" || id == "lemniscate_two_circles") {
        const int J = r.count("J", 16);
        const double cx = r.get("center_x"), a = r.positive("scale");
        const double eps = id == "lemniscate" ? r.get("asymmetry") : 0.0;
        if (!(std::abs(eps) < 1.0)) r.bad("asymmetry must lie in (-1, 1)");
        const bool rotate = id == "lemniscate" && r.flag("rotate");
        auto lemn = [=](double t) -> Vec2 {
            const double g = a * (1.0 - eps * std::cos(t));
            Vec2 p(g * std::cos(t), g * std::sin(t) * std::cos(t));
            if (rotate) p = -p;
            return Vec2(cx, 0.0) + p;
        };
        const double xmin = cx - a * (1.0 + std::abs(eps));
        if (!(xmin > 0.0)) r.bad("lemniscate must stay in the right half plane");
        if (id == "lemniscate") {
            // start slightly off the crossing so that no two nodes coincide
            auto nodes = equidistribute([=](double u) { return lemn(2.0 * kPi * u + 0.1); }, J, true);
            return GeneratingCurve::closed(std::move(nodes));
        }
        const double rc = r.positive("circle_radius");
        if (!(rc < 0.5 * a)) r.bad("circle_radius must be below half the scale");
        // lemniscate from t = 0 (rightmost point, moving up) with a full circle
        // inserted at t = 0 and at t = pi, each traced in the sense of its lobe
        const Vec2 right(cx + a, 0.0), left(cx - a, 0.0);
        const double lem_len = [&] {
            double s = 0.0;
            Vec2 p = lemn(0.0);
            for (int i = 1; i <= 20000; ++i) {
                const Vec2 q = lemn(2.0 * kPi * i / 20000);
                s += (q - p).norm();
                p = q;
            }
            return s;
        }();
        const double circ = 2.0 * kPi * rc;
        const double total = lem_len + 2.0 * circ;
        auto f = [=](double u) -> Vec2 {
            double s = u * total;
            if (s < circ) {
                const double b = s / rc;
                return right + rc * Vec2(std::cos(b) - 1.0, std::sin(b));
            }
            s -= circ;
            const double half = 0.5 * lem_len;
            if (s < half) return lemn(kPi * s / half);
            s -= half;
            if (s < circ) {
                const double b = s / rc;
                return left + rc * Vec2(1.0 - std::cos(b), std::sin(b));
            }
            s -= circ;
            return lemn(kPi + kPi * s / half);
        };
        auto nodes = equidistribute([&](double u) { return f(std::fmod(u + 0.5 / J, 1.0)); }, J, true);
        return GeneratingCurve::closed(std::move(nodes));
    }
    if (id == "flat_disc") {
        const int J = r.count("J", 4);
        const double W = r.positive("width"), H = r.positive("height");
        const double rad = 0.5 * H, reach = 0.5 * W - rad;
        if (!(reach > 0.0)) r.bad("width must exceed height");
        const double total = 2.0 * reach + kPi * rad;
        auto f = [=](double u) -> Vec2 {
            double s = u * total;
            if (s < reach) return Vec2(s, rad);
            s -= reach;
            if (s < kPi * rad) {
                const double a = 0.5 * kPi - s / rad;
                return Vec2(reach, 0.0) + rad * Vec2(std::cos(a), std::sin(a));
            }
            s -= kPi * rad;
            return Vec2(reach - s, -rad);
        };
        auto nodes = equidistribute(f, J + 1, false);
        nodes.front() = Vec2(0.0, rad);
        nodes.back() = Vec2(0.0, -rad);
        return GeneratingCurve::open(std::move(nodes), BoundaryKind::Axis, BoundaryKind::Axis);
    }
    if (id == "sphere_cap") {
        const int J = r.count("J", 2);
        const double R = r.positive("radius"), phi = r.get("polar_angle");
        if (!(phi > 0.0 && phi < kPi)) r.bad("polar_angle must lie in (0, pi)");
        std::vector<Vec2> nodes(J + 1);
        for (int j = 0; j <= J; ++j) {
            const double t = phi * j / J;
            nodes[j] = R * Vec2(std::sin(t), std::cos(t));
        }
        nodes.front() = Vec2(0.0, R);
        return GeneratingCurve::open(std::move(nodes), BoundaryKind::Axis, BoundaryKind::Navier);
    }
    if (id == "cylinder") {
        const int J = r.count("J", 1);
        const double R = r.positive("radius"), H = r.positive("height");
        std::vector<Vec2> nodes(J + 1);
        for (int j = 0; j <= J; ++j) nodes[j] = Vec2(R, 0.5 * H - H * j / J);
        return GeneratingCurve::open(std::move(nodes), BoundaryKind::Navier, BoundaryKind::Navier);
    }
    if (id == "dumbbell") {
        const int J = r.count("J", 2);
        const double Re = r.positive("end_radius"), Rn = r.positive("neck_radius"), H = r.positive("height");
        auto f = [=](double u) -> Vec2 {
            const double y = 0.5 * H - H * u;
            const double c = std::cos(kPi * y / H);
            return Vec2(Re - (Re - Rn) * c * c, y);
        };
        auto nodes = equidistribute(f, J + 1, false);
        return GeneratingCurve::open(std::move(nodes), BoundaryKind::Navier, BoundaryKind::Navier);
    }
    if (id == "torus_cap") {
        const int J = r.count("J", 2);
        const double cx = r.get("center_x"), R = r.positive("radius"), a0 = r.get("start_angle");
        if (!(cx > R)) r.bad("torus cap must stay in the right half plane");
        if (!(a0 >= 0.0 && a0 < kPi)) r.bad("start_angle must lie in [0, pi)");
        std::vector<Vec2> nodes(J + 1);
        for (int j = 0; j <= J; ++j) {
            const double t = a0 + (kPi - a0) * j / J;
            nodes[j] = Vec2(cx - R * std::cos(t), R * std::sin(t));
        }
        return GeneratingCurve::open(std::move(nodes), BoundaryKind::Clamped, BoundaryKind::Free);
    }
    if (id == "straight_line") {
        const int J = r.count("J", 1);
        const double x0 = r.get("x_start"), x1 = r.get("x_end"), y = r.get("height");
        if (!(x0 > 0.0 && x1 > x0)) r.bad("need 0 < x_start < x_end");
        std::vector<Vec2> nodes(J + 1);
        for (int j = 0; j <= J; ++j) nodes[j] = Vec2(x0 + (x1 - x0) * j / J, y);
        return GeneratingCurve::open(std::move(nodes), BoundaryKind::Clamped, BoundaryKind::Clamped);
    }
    r.bad("preset not implemented");
}

}  // namespace axiwill
