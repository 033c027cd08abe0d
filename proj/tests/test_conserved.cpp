#include "axiwill/conserved.hpp"
#include "axiwill/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstring>

using namespace axiwill;
using namespace axiwill::testing_support;

namespace {

constexpr double kConservationTol = 1e-10;

SchemeState disc_state(const ModelParams& p) {
    return initial_state(make_preset("flat_disc", {{"J", 32}}), p, SchemeKind::Kappa);
}

}  // namespace

TEST(Conserved, NoConstraintReproducesPlainStep) {
    ModelParams p;
    p.kbar = -0.5;
    const auto s = disc_state(p);
    const auto plain = advance(s, p, 1e-3, SchemeKind::Kappa);
    const auto res = conserved_step(s, p, 1e-3, ConservationMode::None, NewtonConfig{}, 0.0, 0.0);
    EXPECT_EQ(res.iterations, 0);
    EXPECT_EQ(res.lambda_A, 0.0);
    EXPECT_EQ(res.lambda_V, 0.0);
    for (size_t k = 0; k < plain.curve.nodes.size(); ++k) {
        EXPECT_EQ(plain.curve.nodes[k], res.state.curve.nodes[k]);
        EXPECT_EQ(plain.kappa[k], res.state.kappa[k]);
    }
}

TEST(Conserved, EachModeHoldsItsConstraints) {
    ModelParams p;
    for (auto mode : {ConservationMode::Area, ConservationMode::Volume, ConservationMode::AreaAndVolume}) {
        auto s = disc_state(p);
        const double A0 = surface_area(s.curve), V0 = enclosed_volume(s.curve);
        for (int m = 0; m < 10; ++m) {
            const auto res = conserved_step(s, p, 1e-3, mode, NewtonConfig{}, A0, V0);
            s = res.state;
            if (mode != ConservationMode::Volume) {
                EXPECT_LE(std::abs(surface_area(s.curve) - A0) / A0, kConservationTol);
            }
            if (mode != ConservationMode::Area) {
                EXPECT_LE(std::abs(enclosed_volume(s.curve) - V0) / V0, kConservationTol);
            }
            EXPECT_LE(res.iterations, 5);
            EXPECT_LE(res.report.side_residual, 1e-10);
        }
    }
}

TEST(Conserved, AreaModeOnOpenCurveWithoutConormals) {
    ModelParams p;
    p.kbar = 1.0;
    auto s = initial_state(make_preset("torus_cap", {{"J", 32}}), p, SchemeKind::Kappa);
    s.curve.ends = {BoundaryKind::Clamped, BoundaryKind::Navier};
    EXPECT_EQ(kind_of_failure([&] { conserved_step(s, p, 1e-3, ConservationMode::Area, NewtonConfig{}, 1.0, 0.0); }),
              ErrorKind::InvalidConfig);
    s.curve.ends = {BoundaryKind::Clamped, BoundaryKind::Clamped};
    s = initial_state(s.curve, p, SchemeKind::Kappa);
    const double A0 = surface_area(s.curve);
    const auto res = conserved_step(s, p, 1e-3, ConservationMode::Area, NewtonConfig{}, A0, 0.0);
    EXPECT_LE(std::abs(surface_area(res.state.curve) - A0) / A0, kConservationTol);
}

TEST(Conserved, VolumeRequiresClosedSurface) {
    ModelParams p;
    auto s = initial_state(make_preset("torus_cap", {{"J", 16}}), p, SchemeKind::Kappa);
    s.curve.ends = {BoundaryKind::Clamped, BoundaryKind::Clamped};
    EXPECT_EQ(kind_of_failure([&] { conserved_step(s, p, 1e-3, ConservationMode::Volume, NewtonConfig{}, 1, 1); }),
              ErrorKind::NotClosed);
}

TEST(Conserved, RejectsInvalidNewtonSettings) {
    ModelParams p;
    const auto s = disc_state(p);
    NewtonConfig cfg;
    cfg.max_iterations = 0;
    EXPECT_EQ(kind_of_failure([&] { conserved_step(s, p, 1e-3, ConservationMode::Area, cfg, 1, 1); }),
              ErrorKind::InvalidConfig);
}

TEST(Conserved, IterationCapIsReported) {
    ModelParams p;
    const auto s = disc_state(p);
    NewtonConfig cfg;
    cfg.max_iterations = 1;
    cfg.tolerance = 1e-300;
    const double A0 = surface_area(s.curve);
    EXPECT_EQ(kind_of_failure([&] { conserved_step(s, p, 1e-3, ConservationMode::Area, cfg, A0 * 1.1, 0); }),
              ErrorKind::NewtonDivergence);
}

TEST(Conserved, ModeNamesRoundTrip) {
    for (auto m : {ConservationMode::None, ConservationMode::Area, ConservationMode::Volume,
                   ConservationMode::AreaAndVolume})
        EXPECT_EQ(conservation_mode_from_string(to_string(m)), m);
    EXPECT_EQ(kind_of_failure([] { conservation_mode_from_string("mass"); }), ErrorKind::InvalidConfig);
}
