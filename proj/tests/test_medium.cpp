#include <gtest/gtest.h>

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <random>

#include "eitbragg/medium.hpp"

using namespace eitbragg;

namespace {

constexpr double ge = 1e7;

EitMedium medium(double omega_d_ge, double gamma_s_ge = 0.0) {
    return {ge, gamma_s_ge * ge, omega_d_ge * ge, 2.5e5};
}

void expect_complex_near(complex got, complex want, double tol) {
    EXPECT_NEAR(got.real(), want.real(), tol) << "got " << got << " want " << want;
    EXPECT_NEAR(got.imag(), want.imag(), tol) << "got " << got << " want " << want;
}

}  // namespace

TEST(AlphaCold, ExactTransparencyPoint) {
    const auto m = medium(2.0);
    const complex a = alpha_cold(m, {0.0, 0.0});
    EXPECT_EQ(a.real(), 0.0);
    EXPECT_EQ(a.imag(), 0.0);
}

TEST(AlphaCold, DrivenAtOneLinewidth) {
    // i / (1 - i + 4/(-i)) = i / (1 + 3i) = 0.3 + 0.1i
    const auto m = medium(2.0);
    expect_complex_near(alpha_cold(m, {ge, ge}) / m.a0, {0.3, 0.1}, 1e-15);
}

TEST(AlphaCold, TwoLevelLorentzian) {
    const auto m = medium(0.0);
    expect_complex_near(alpha_cold(m, {-10 * ge, -10 * ge}) / m.a0, complex{10.0, 1.0} / 101.0, 1e-15);
}

TEST(AlphaCold, NoDriveIgnoresRamanDetuning) {
    // Omega_d = 0 with gamma_s = Delta_R = 0 used to be 0/0 in the cleared form.
    const auto m = medium(0.0);
    expect_complex_near(alpha_cold(m, {ge, 0.0}) / m.a0, complex{0.0, 1.0} / complex{1.0, -1.0}, 1e-15);
}

TEST(AlphaCold, PassiveForRandomInputs) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        EitMedium m{ge * (0.1 + 10 * u(rng)), ge * 0.5 * u(rng), ge * 10 * u(rng), 1e3 + 1e6 * u(rng)};
        Detunings d{ge * (200 * u(rng) - 100), ge * (200 * u(rng) - 100)};
        if (i % 3 == 0) d.delta_r = d.delta;
        EXPECT_GE(alpha_cold(m, d).imag(), 0.0);
    }
}

TEST(AlphaCold, MirrorSymmetryUnderResonantDrive) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (double gs : {0.0, 1e-3, 0.1}) {
        const auto m = medium(2.5, gs);
        for (int i = 0; i < 1000; ++i) {
            const double d = u(rng) * ge;
            const complex plus = alpha_cold(m, {d, d});
            const complex minus = alpha_cold(m, {-d, -d});
            EXPECT_LE(std::abs(minus + std::conj(plus)), 1e-14 * std::abs(plus));
        }
    }
}

TEST(AlphaCold, AutlerTownesPeaksAtRabiFrequency) {
    for (double od : {2.0, 5.0}) {
        const auto m = medium(od);
        for (double sign : {-1.0, 1.0}) {
            auto neg_abs = [&](double d) { return -alpha_cold(m, {d, d}).imag(); };
            const double centre = sign * m.omega_d;
            std::uintmax_t iters = 200;
            const auto [at, val] =
                boost::math::tools::brent_find_minima(neg_abs, centre - 0.5 * ge, centre + 0.5 * ge, 50, iters);
            EXPECT_NEAR(at, centre, 1e-3 * ge);
            EXPECT_NEAR(-val, m.a0, 1e-9 * m.a0);
        }
    }
}

TEST(AlphaCold, TwoLevelLimitConsistency) {
    const auto m = medium(0.0);
    for (double k : {10.0, 20.0, 50.0, 100.0, 1000.0}) {
        for (double sign : {-1.0, 1.0}) {
            const double d = sign * k * ge;
            const complex full = alpha_cold(m, {d, d});
            EXPECT_LE(std::abs(full - alpha_two_level_limit(m, d)), m.a0 / (k * k));
        }
    }
}

TEST(AlphaCold, SlopeAtLineCentreIsInverseGroupVelocity) {
    const auto m = medium(2.0);
    const double h = 1e-6 * ge;
    const double slope = (alpha_cold(m, {h, h}).real() - alpha_cold(m, {-h, -h}).real()) / (2 * h);
    EXPECT_NEAR(slope * group_velocity(m), 1.0, 1e-6);
}

TEST(AlphaTwoLevelLimit, SignAndMagnitude) {
    const auto m = medium(2.0);
    EXPECT_DOUBLE_EQ(alpha_two_level_limit(m, -100 * ge), 0.01 * m.a0);
    EXPECT_DOUBLE_EQ(alpha_two_level_limit(m, 100 * ge), -0.01 * m.a0);
    EXPECT_THROW(alpha_two_level_limit(m, 0.0), std::invalid_argument);
}

TEST(AlphaTwoLevelLimit, CloseToFullModelFarFromResonance) {
    const auto m = medium(2.0);
    const double d = 100 * ge;
    EXPECT_LT(std::abs(alpha_cold(m, {d, d}) - alpha_two_level_limit(m, d)), 0.002 * m.a0);
}

TEST(AlphaEtaThermal, LineCentre) {
    const EitMedium m{ge, 1e-4 * ge, 2 * ge, 2.5e5};
    const StarkModulation st{0.8 * ge, 0.0};
    const auto [ap, eta] = alpha_eta_thermal(m, st, {0.0, 0.0});
    // (Omega_d^2 gamma_s + gamma_e S_gs^2/8) gamma_e / Omega_d^4 in units of a0: (4e-4 + 0.08)/16
    EXPECT_NEAR(ap.real(), 0.0, 1e-12 * m.a0);
    EXPECT_NEAR(ap.imag() / m.a0, 5.025e-3, 1e-15);
    // gamma_e S_gs / (4 Omega_d^2) = 0.8/16
    EXPECT_NEAR(eta.real() / m.a0, 0.05, 1e-15);
    EXPECT_EQ(eta.imag(), 0.0);
}

TEST(AlphaEtaThermal, CouplingSurvivesOnlyThroughSg) {
    const EitMedium m{ge, 1e-4 * ge, 2 * ge, 2.5e5};
    const Detunings mean{0.3 * ge, 0.3 * ge};
    const StarkModulation st{0.4 * ge, 0.4 * ge};  // S_gs = 0
    const auto [ap, eta] = alpha_eta_thermal(m, st, mean);
    const double od2 = m.omega_d * m.omega_d;
    const double mix = od2 - mean.delta * mean.delta_r;
    const double denom = mix * mix + ge * ge * mean.delta_r * mean.delta_r;
    EXPECT_NEAR(eta.real(), -m.a0 * ge * mean.delta_r * mean.delta_r * st.s_g / (4 * denom), 1e-12 * m.a0);
    EXPECT_EQ(eta.imag(), 0.0);

    const auto none = alpha_eta_thermal(m, {0.0, 0.0}, mean);
    EXPECT_EQ(none.eta, complex(0.0, 0.0));
}

TEST(AlphaEtaThermal, ReducesToSlowLightNearResonance) {
    const EitMedium m{ge, 0.0, 2 * ge, 2.5e5};
    const StarkModulation st{0.8 * ge, 0.0};
    const double d = 1e-4 * ge;
    const auto [ap, eta] = alpha_eta_thermal(m, st, {d, d});
    const double vg = group_velocity(m);
    EXPECT_NEAR(ap.real() * vg / d, 1.0, 1e-6);
    EXPECT_NEAR(eta.real() * 4 * vg / st.s_gs(), 1.0, 1e-4);
}

TEST(AlphaEtaThermal, SingularDenominatorRejected) {
    const EitMedium m{ge, 1e-4 * ge, 0.0, 2.5e5};
    EXPECT_THROW(alpha_eta_thermal(m, {0.8 * ge, 0.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST(GroupVelocity, SlowLightValues) {
    EXPECT_DOUBLE_EQ(group_velocity({1e7, 0.0, 2e7, 2.5e5}), 160.0);
    EXPECT_DOUBLE_EQ(group_velocity({1e7, 0.0, 5e7, 2.5e5}), 1000.0);
    EXPECT_DOUBLE_EQ(group_velocity({1e7, 0.0, 4e7, 2.5e5}), 4 * 160.0);
    EXPECT_THROW(group_velocity({1e7, 0.0, 0.0, 2.5e5}), std::invalid_argument);
}

TEST(TransparencyWindow, ScalesWithDriveAndLength) {
    const EitMedium m{ge, 0.0, 2 * ge, 2.5e5};
    const double length = 100.0 / (2 * m.a0);  // 2 a0 L = 100
    EXPECT_NEAR(transparency_window(m, length), 0.4 * ge, 1e-9 * ge);
    EXPECT_NEAR(transparency_window({ge, 0.0, 5 * ge, 2.5e5}, length), 2.5 * ge, 1e-9 * ge);
    EXPECT_NEAR(transparency_window(m, 4 * length), 0.2 * ge, 1e-9 * ge);
    EXPECT_THROW(transparency_window(m, 0.0), std::invalid_argument);
}

TEST(MediumChecks, InvariantsAndWarnings) {
    EXPECT_NO_THROW(validate(EitMedium{ge, 0.0, 0.0, 1.0}));
    EXPECT_THROW(validate(EitMedium{0.0, 0.0, 0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(validate(EitMedium{ge, -1.0, 0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(validate(EitMedium{ge, 0.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_TRUE(warnings(EitMedium{ge, 0.0, 2 * ge, 1.0}).empty());
    EXPECT_EQ(warnings(EitMedium{ge, 2 * ge, 2 * ge, 1.0}).size(), 1u);

    const EitMedium m{ge, 1e-4 * ge, 2 * ge, 2.5e5};
    EXPECT_TRUE(thermal_warnings(m, {0.8 * ge, 0.0}).empty());
    EXPECT_FALSE(thermal_warnings(m, {4.0 * ge, 0.0}).empty());
    EXPECT_FALSE(thermal_warnings({ge, 0.5 * ge, 0.5 * ge, 2.5e5}, {0.1 * ge, 0.0}).empty());
}
