#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "acphase/phase_engine.hpp"
#include "acphase/rng.hpp"
#include "support.hpp"

using namespace acphase;
using namespace testing_support;

namespace {

long double series_j(int order, long double x)
{
    long double term = 1, sum = 0;
    for (int k = 1; k <= order; ++k) term *= x / 2 / k;
    for (int k = 0; k < 40; ++k) {
        sum += term;
        term *= -(x * x / 4) / ((k + 1.0L) * (k + 1.0L + order));
    }
    return sum;
}

InterferenceLoop reparam_squared(const InterferenceLoop& loop)
{
    auto g = [](double u) { return u * u; };
    auto dg = [](double u) { return 2 * u; };
    InterferenceLoop out = loop;
    for (auto* path : {&out.path1, &out.path2})
        for (auto& s : *path) s = reparametrized(s, g, dg);
    return out;
}

Connection dipole_wave(double E0, double w, Vec3 d, Vec3 m = {}) { return {Dipole{d, m}, PlaneWave(E0, w)}; }

} // namespace

// ---------------------------------------------------------------- loop phase

TEST(LoopPhase, ZeroAmplitude)
{
    const auto loop = make_diamond(20, 7, 3, 1, 0.5);
    EXPECT_EQ(loop_phase(loop, dipole_wave(0.0, 1.0, {0.3, 0.2, 0.1}), 0.3), 0.0);
}

TEST(LoopPhase, CoincidentPathsGiveZero)
{
    const auto loop = make_diamond(20, 7, 3, 1, 0.0);
    EXPECT_NEAR(loop_phase(loop, dipole_wave(1.0, 1.0, {0.3, 0.2, 0.1}, {0.1, 0.1, 0.1}), 0.4), 0.0, 1e-15);
    const auto ell = make_ellipse(9, 2, 0.0);
    EXPECT_EQ(loop_phase(ell, {Charge{0.3}, PlaneWave(1, 1)}, 0.1), 0.0);
}

TEST(LoopPhase, DiamondReferenceCase)
{
    // w theta = 7, w T = 20, alpha/s = 0.3, E0 d_y tuned for |C| = 0.5.
    const double w = 1.0, th = 7.0, T = 20.0, s = 1.0;
    const double al = 0.3 * s, l = std::sqrt(s * s - al * al);
    const double factor = 4.0 * (2 * al / (w * th)) * std::sin(w * th / 2) * std::sin(w * (T + th) / 2);
    const double dy = 0.5 / std::fabs(factor);
    const auto c = extract_AB(make_diamond(T, th, 2.0, l, al), dipole_wave(1.0, w, {0, dy, 0}));
    EXPECT_LT(rel_err(c.Cmag, 0.5), 1e-6);
    EXPECT_LT(std::fabs(c.B), 1e-9 * c.Cmag);
}

TEST(LoopPhase, OrientationReversalNegates)
{
    Sampler rng(31);
    for (int i = 0; i < 5; ++i) {
        const auto loop = make_asymmetric(9.0, 10.0, 4.0, 2.0, 1.0, rng.uniform(0.2, 1));
        const auto conn = dipole_wave(1.0, rng.uniform(0.5, 2), rng.vec3(-1, 1), rng.vec3(-1, 1));
        const double t0 = rng.uniform(0, 3);
        const double a = loop_phase(loop, conn, t0), b = loop_phase(loop.swapped(), conn, t0);
        EXPECT_LT(std::fabs(a + b), 1e-10 * std::max(1.0, std::fabs(a)));
    }
}

TEST(LoopPhase, ReparametrizationInvariance)
{
    Sampler rng(32);
    const std::vector<InterferenceLoop> loops = {make_diamond(12, 5, 2, 1, 0.6), make_ellipse(15, 3, 0.7),
                                                 make_asymmetric(11, 12, 5, 2, 1, 0.6)};
    for (const auto& loop : loops) {
        const auto conn = dipole_wave(1.0, 1.3, rng.vec3(-1, 1), rng.vec3(-1, 1));
        const auto r1 = loop_phase_detailed(loop, conn, 0.2);
        const auto r2 = loop_phase_detailed(reparam_squared(loop), conn, 0.2);
        const double tol = 1e-10 * std::max(std::fabs(r1.value), 1e-2 * r1.abs_scale) + r1.error + r2.error;
        EXPECT_LT(std::fabs(r1.value - r2.value), tol) << loop.kind;
    }
    const WaveguideMode te(ModeKind::TE, 1.0, 2.0, 3.0, 0, 1, 0.9);
    const auto guide = make_guide_crossing(17.0, te, 0.4);
    const Connection gc{Dipole{{0.4, 0.3, 0}, {}}, te};
    const auto g1 = loop_phase_detailed(guide, gc, 0.1), g2 = loop_phase_detailed(reparam_squared(guide), gc, 0.1);
    EXPECT_LT(std::fabs(g1.value - g2.value), 1e-10 * std::fabs(g1.value) + g1.error + g2.error);
}

TEST(LoopPhase, NonConvergenceCarriesSegment)
{
    PhaseOptions opt;
    opt.pieces_per_period = 0.0;
    opt.max_subdivisions = 8;
    const auto loop = make_diamond(2000, 700, 3, 1, 0.5);
    try {
        loop_phase(loop, dipole_wave(1.0, 1.0, {0, 1, 0}), 0.0, opt);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_GE(e.segment(), 0);
        EXPECT_LT(e.segment(), 6);
        EXPECT_GT(e.error_estimate(), 0.0);
    }
}

// ---------------------------------------------------------------- extraction

TEST(ExtractAB, ZeroField)
{
    const auto c = extract_AB(make_diamond(20, 7, 3, 1, 0.5), dipole_wave(0.0, 1.0, {0, 1, 0}));
    EXPECT_EQ(c.A, 0.0);
    EXPECT_EQ(c.B, 0.0);
    EXPECT_EQ(c.Cmag, 0.0);
}

TEST(ExtractAB, SymmetricDiamondHasNoSineTerm)
{
    Sampler rng(33);
    for (int i = 0; i < 10; ++i) {
        const auto loop = make_diamond(rng.uniform(5, 50), rng.uniform(2, 20), 2, 1, rng.uniform(0.1, 1));
        const auto c = extract_AB(loop, dipole_wave(1.0, rng.uniform(0.3, 3), rng.vec3(-1, 1), rng.vec3(-1, 1)));
        EXPECT_LT(std::fabs(c.B), 1e-9 * c.Cmag);
    }
}

TEST(ExtractAB, CoefficientInvariants)
{
    Sampler rng(34);
    for (int i = 0; i < 10; ++i) {
        const auto loop = make_asymmetric(9, 10, 4, 2, 1, rng.uniform(0.2, 1));
        const auto c = extract_AB(loop, dipole_wave(1.0, rng.uniform(0.3, 3), rng.vec3(-1, 1), rng.vec3(-1, 1)));
        EXPECT_GE(c.Cmag, 0.0);
        EXPECT_GE(c.Cmag, std::fabs(c.A));
        EXPECT_GE(c.Cmag, std::fabs(c.B));
    }
}

TEST(ExtractAB, FlatLowerArmBreaksSymmetry)
{
    const auto loop = make_asymmetric(9, 10, 4, 2, 1, 0.8, 0.0);
    const auto c = extract_AB(loop, {Charge{0.3}, PlaneWave(1.0, 1.1)});
    EXPECT_GT(std::fabs(c.B), 1e-3 * c.Cmag);
    const auto cd = extract_AB(loop, dipole_wave(1.0, 1.1, {0, 0, 0}, {0, 0.5, 0}));
    EXPECT_GT(std::fabs(cd.B), 1e-3 * cd.Cmag);
}

TEST(ExtractAB, StaticFieldRejected)
{
    const Connection conn{Dipole{{0, 1, 0}, {}}, UniformStaticField{{1, 0, 0}, {}}};
    EXPECT_THROW(extract_AB(make_diamond(2, 1, 1, 1, 1), conn), ConfigError);
}

TEST(ExtractAB, FrequencyMismatchRejected)
{
    EXPECT_THROW(extract_AB(make_diamond(2, 1, 1, 1, 1), dipole_wave(1, 1, {0, 1, 0}), 2.0), ConfigError);
}

TEST(ExtractAB, NonSinusoidalPhaseIsModelViolation)
{
    // A non-exact "gauge" term adds a t0-independent offset to phi, breaking A cos + B sin.
    Connection conn{Charge{0.3}, PlaneWave(1.0, 1.0)};
    conn.gauge_gradient = [](const Vec4& p) { return Vec4{0, 0, 0, p.x}; };
    EXPECT_THROW(extract_AB(make_diamond(10, 3, 2, 1, 0.5), conn), ModelViolationError);
}

TEST(ExtractAB, LinearInAmplitudeAndMoments)
{
    Sampler rng(35);
    const auto loop = make_asymmetric(9, 10, 4, 2, 1, 0.6);
    const Vec3 d{0.2, 0.7, 0.1}, m{0.05, 0.3, 0.02};
    const auto base = extract_AB(loop, dipole_wave(1.0, 1.3, d, m));
    for (int i = 0; i < 3; ++i) {
        const double k = rng.uniform(0.1, 10);
        const auto amp = extract_AB(loop, dipole_wave(k, 1.3, d, m));
        EXPECT_LT(rel_err(amp.Cmag, k * base.Cmag), 1e-10);
        const auto dy = extract_AB(loop, dipole_wave(1.0, 1.3, {0, k * d.y, 0}));
        const auto dy1 = extract_AB(loop, dipole_wave(1.0, 1.3, {0, d.y, 0}));
        EXPECT_LT(rel_err(dy.Cmag, k * dy1.Cmag), 1e-10);
        const auto my = extract_AB(loop, dipole_wave(1.0, 1.3, {}, {0, k * m.y, 0}));
        const auto my1 = extract_AB(loop, dipole_wave(1.0, 1.3, {}, {0, m.y, 0}));
        EXPECT_LT(rel_err(my.Cmag, k * my1.Cmag), 1e-10);
    }
}

TEST(ExtractAB, GuideCrossingHasNoCosineTerm)
{
    const WaveguideMode te(ModeKind::TE, 1.0, 2.0, 3.0, 1, 2, 0.9);
    const auto c = extract_AB(make_guide_crossing(23.0, te, 0.3), {Dipole{{0.3, 0.5, 0.1}, {0, 0, 0.01}}, te});
    EXPECT_LT(std::fabs(c.A), 1e-9 * c.Cmag);
}

// ---------------------------------------------------------------- physics invariants

TEST(Invariants, AharonovBohmGaugeInvariance)
{
    // chi(t, x, y, z) = 0.3 sin(0.7 t) x z + 0.2 x^2 - 0.1 t z
    auto grad_chi = [](const Vec4& p) {
        return Vec4{0.3 * 0.7 * std::cos(0.7 * p.t) * p.x * p.z - 0.1 * p.z,
                    0.3 * std::sin(0.7 * p.t) * p.z + 0.4 * p.x, 0.0,
                    0.3 * std::sin(0.7 * p.t) * p.x - 0.1 * p.t};
    };
    const std::vector<InterferenceLoop> loops = {make_diamond(12, 5, 2, 1, 0.6), make_ellipse(15, 3, 0.7),
                                                 make_asymmetric(11, 12, 5, 2, 1, 0.6)};
    for (const auto& loop : loops) {
        const Connection plain{Charge{0.3}, PlaneWave(1.0, 1.2)};
        Connection gauged = plain;
        gauged.gauge_gradient = grad_chi;
        const auto a = extract_AB(loop, plain), b = extract_AB(loop, gauged);
        EXPECT_LT(rel_err(a.Cmag, b.Cmag), 1e-8) << loop.kind;
    }
}

TEST(Invariants, StaticUniformFieldGivesNoPhase)
{
    Sampler rng(36);
    const Connection conn{Dipole{rng.vec3(-1, 1), rng.vec3(-1, 1)}, UniformStaticField{rng.vec3(-1, 1), rng.vec3(-1, 1)}};
    const auto r = loop_phase_detailed(make_diamond(10, 4, 2, 1, 0.5), conn, 0.0);
    EXPECT_LT(std::fabs(r.value), 1e-12 * std::max(1.0, r.abs_scale));
}

TEST(Invariants, StaticLineChargePhaseIsVelocityIndependent)
{
    // A magnetic moment along the line charge picks up |phi| = |m lambda| around it.
    const double lam = 0.8, my = 0.35;
    const Connection conn{Dipole{{}, {0, my, 0}}, LineChargeField{lam}};
    const double T = 10, th = 4, tau = T / 2 + th, d = 2, l = 1, al = 0.5;
    const std::vector<std::pair<InterferenceLoop, InterferenceLoop>> pairs = {
        {make_diamond(T, th, d, l, al), make_diamond(10 * T, 10 * th, d, l, al)},
        {make_ellipse(tau, d + l, al), make_ellipse(10 * tau, d + l, al)},
        {make_asymmetric(tau, T, th, d, l, al), make_asymmetric(10 * tau, 10 * T, 10 * th, d, l, al)}};
    for (const auto& [slow, fast] : pairs) {
        const double a = loop_phase(slow, conn, 0.0), b = loop_phase(fast, conn, 0.0);
        EXPECT_LT(rel_err(a, b), 1e-9) << slow.kind;
        EXPECT_LT(rel_err(std::fabs(a), my * lam), 1e-9) << slow.kind;
    }
}

// ---------------------------------------------------------------- Bessel functions

TEST(Bessel, Origin)
{
    EXPECT_EQ(bessel_j0(0.0), 1.0);
    EXPECT_EQ(bessel_j1(0.0), 0.0);
}

TEST(Bessel, KnownValue) { EXPECT_NEAR(bessel_j0(1.0), 0.7651976865579666, 1e-15); }

TEST(Bessel, MatchesPowerSeries)
{
    for (double x = -8.0; x <= 8.0; x += 0.0625) {
        EXPECT_NEAR(bessel_j0(x), static_cast<double>(series_j(0, x)), 1e-12) << x;
        EXPECT_NEAR(bessel_j1(x), static_cast<double>(series_j(1, x)), 1e-12) << x;
    }
}

TEST(Bessel, MatchesIndependentLibraryUpTo50)
{
    for (double x = 8.0; x <= 50.0; x += 0.173) {
        EXPECT_NEAR(bessel_j0(x), boost::math::cyl_bessel_j(0, x), 1e-12) << x;
        EXPECT_NEAR(bessel_j1(x), boost::math::cyl_bessel_j(1, x), 1e-12) << x;
        EXPECT_NEAR(bessel_j1(-x), -boost::math::cyl_bessel_j(1, x), 1e-12) << x;
    }
}

TEST(Bessel, Zeros)
{
    EXPECT_LT(std::fabs(bessel_j0(2.404825557695773)), 1e-12);
    EXPECT_LT(std::fabs(bessel_j1(3.8317059702)), 1e-10);
}

TEST(Bessel, J1AsymptoticForm)
{
    for (double x : {200.0, 500.0, 1000.0}) {
        const double env = std::sqrt(2.0 / (std::numbers::pi * x));
        EXPECT_LT(std::fabs(bessel_j1(x) - env * std::cos(x - 0.75 * std::numbers::pi)), 1e-2 * env);
    }
}

// ---------------------------------------------------------------- visibility

TEST(Visibility, Values)
{
    EXPECT_EQ(visibility(PhaseCoefficients::from(0, 0)), 1.0);
    EXPECT_LT(std::fabs(visibility(PhaseCoefficients::from(2.404825557695773, 0))), 1e-12);
    const auto c = PhaseCoefficients::from(0.06, 0.08);
    // <phi^2> = |C|^2 / 2, so the second-order expansion of <exp(i phi)> is 1 - |C|^2 / 4.
    EXPECT_NEAR(visibility(c), 1 - 0.0025, 2e-6);
    EXPECT_DOUBLE_EQ(small_phase_visibility(c), 1 - 0.005);
}

TEST(Visibility, MonotoneUpToFirstZero)
{
    double prev = 1.0;
    for (double x = 0.01; x < 2.404825557695773; x += 0.01) {
        const double f = visibility(PhaseCoefficients::from(x, 0));
        EXPECT_LT(f, prev);
        EXPECT_LE(std::fabs(f), 1.0);
        prev = f;
    }
}

TEST(Visibility, SmallPhaseFormulaGap)
{
    // The reported 1 - |C|^2/2 undershoots J0 by |C|^2/4 at leading order.
    for (double x = 0.0; x <= 0.3; x += 0.01) {
        const auto c = PhaseCoefficients::from(x, 0);
        EXPECT_NEAR(visibility(c), 1 - x * x / 4, std::pow(x, 4) / 64 + 1e-16);
        EXPECT_NEAR(visibility(c) - small_phase_visibility(c), x * x / 4, std::pow(x, 4) / 64 + 1e-16);
    }
}

// ---------------------------------------------------------------- random numbers and Monte Carlo

TEST(Philox, KnownAnswerVectors)
{
    const Philox4x32 zero(0);
    const auto r0 = zero({0, 0, 0, 0});
    EXPECT_EQ(r0, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    const Philox4x32 ones(0xffffffffffffffffull);
    const auto r1 = ones({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
    EXPECT_EQ(r1, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, UniformsInUnitInterval)
{
    const Philox4x32 g(123);
    double sum = 0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        for (double u : g.uniform2(i)) {
            EXPECT_GE(u, 0.0);
            EXPECT_LT(u, 1.0);
            sum += u;
        }
    }
    EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

TEST(MonteCarlo, ZeroFieldIsExact)
{
    const auto e = monte_carlo_visibility(PhaseCoefficients::from(0, 0), 1000, 5);
    EXPECT_EQ(e.mean, std::complex<double>(1.0, 0.0));
    EXPECT_EQ(e.stderr_re, 0.0);
    EXPECT_EQ(e.stderr_im, 0.0);
}

TEST(MonteCarlo, TooFewSamples)
{
    EXPECT_THROW(monte_carlo_visibility(PhaseCoefficients::from(1, 0), 1, 5), DomainError);
}

TEST(MonteCarlo, MatchesBesselAtHalf)
{
    const auto e = monte_carlo_visibility(PhaseCoefficients::from(0.3, 0.4), 1'000'000, 77);
    EXPECT_LT(std::fabs(e.mean.real() - 0.93846980724081), 3 * e.stderr_re);
    EXPECT_LT(std::fabs(e.mean.imag()), 3 * e.stderr_im);
    EXPECT_LE(e.modulus(), 1.0 + 3 * std::hypot(e.stderr_re, e.stderr_im));
}

TEST(MonteCarlo, VanishesAtFirstZero)
{
    const auto e = monte_carlo_visibility(PhaseCoefficients::from(2.404825557695773, 0), 1'000'000, 78);
    EXPECT_LT(e.modulus(), 3 * std::hypot(e.stderr_re, e.stderr_im));
}

TEST(MonteCarlo, StandardErrorScalesAsInverseRoot)
{
    const auto c = PhaseCoefficients::from(1.1, 0.7);
    std::vector<double> lx, ly;
    for (std::uint64_t n : {10'000ull, 100'000ull, 1'000'000ull}) {
        const auto e = monte_carlo_visibility(c, n, 79);
        EXPECT_LT(std::fabs(e.modulus() - bessel_j0(c.Cmag)), 3 * std::hypot(e.stderr_re, e.stderr_im)) << n;
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(std::hypot(e.stderr_re, e.stderr_im)));
    }
    const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
    EXPECT_GE(slope, -0.55);
    EXPECT_LE(slope, -0.45);
}

TEST(MonteCarlo, IndependentOfThreadCount)
{
    const auto c = PhaseCoefficients::from(0.9, -1.3);
    const auto a = monte_carlo_visibility(c, 200'003, 99, 1);
    for (unsigned t : {2u, 3u, 8u}) {
        const auto b = monte_carlo_visibility(c, 200'003, 99, t);
        EXPECT_EQ(a.mean, b.mean);
        EXPECT_EQ(a.stderr_re, b.stderr_re);
        EXPECT_EQ(a.stderr_im, b.stderr_im);
    }
}

TEST(MonteCarlo, FromLoop)
{
    const auto loop = make_ellipse(20, 3, 0.8);
    const Connection conn{Charge{1.0}, PlaneWave(1.0, 1.0)};
    const auto c = extract_AB(loop, conn);
    const auto e = monte_carlo_visibility(loop, conn, std::nullopt, 100'000, 4);
    EXPECT_LT(std::fabs(e.modulus() - std::fabs(bessel_j0(c.Cmag))), 3 * std::hypot(e.stderr_re, e.stderr_im) + 1e-3);
    const auto v = evaluate_visibility(c, 1000, 4);
    EXPECT_EQ(v.F, visibility(c));
    ASSERT_TRUE(v.mc.has_value());
    EXPECT_EQ(v.small_phase, small_phase_visibility(c));
}
