/**
 * @file  fields.hpp
 * @brief Classical field models, the temporal-gauge potential, and the AB / AC connections.
 *
 * All quantities are in natural units. Conventions:
 *
 *  - PlaneWave: propagation +y, E = E0 sin(w t - k y + w t0) z^, B = E0 sin(...) x^, k = w.
 *  - WaveguideMode: axis along y; fields are Re[ profile(x, z) exp(i(k_y y - w t + w t0)) ]
 *    with the mode functions cos/sin(k_x x), cos/sin(k_z z) used literally in coordinates
 *    centred on the guide axis, x in [-b/2, b/2], z in [-a/2, a/2]. k_x = m pi / b,
 *    k_z = l pi / a. This is the frame in which the two-path crossing at z = +-alpha
 *    reproduces the closed-form guide coefficients (see closed_forms.hpp).
 *    The TE E_z and TM B_x profiles carry the signs required by Faraday's law.
 *  - Static fields (uniform, and a line charge along y through x = z = 0) serve the
 *    zero-frequency checks.
 *
 * The 4-tuples returned by the connections are ordered (t, x, y, z) and are paired
 * componentwise with (dt, dx, dy, dz) by the phase engine.
 */
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <variant>

#include "acphase/errors.hpp"
#include "acphase/vec.hpp"

namespace acphase {

struct PlaneWave {
    double E0 = 0;
    double omega = 0;

    PlaneWave() = default;
    PlaneWave(double amplitude, double angular_frequency) : E0(amplitude), omega(angular_frequency)
    {
        if (!std::isfinite(E0)) throw DomainError("PlaneWave: non-finite amplitude");
        if (!(omega > 0)) throw DomainError("PlaneWave: omega must be positive");
    }
    double k() const { return omega; }
};

enum class ModeKind { TE, TM };

inline std::string to_string(ModeKind kind) { return kind == ModeKind::TE ? "TE" : "TM"; }

class WaveguideMode {
public:
    /// `amplitude` is |B0| for TE and |E0| for TM.
    WaveguideMode(ModeKind kind, double amplitude, double a, double b, int m, int l, double k_y)
        : kind_(kind), amplitude_(amplitude), a_(a), b_(b), m_(m), l_(l), k_y_(k_y)
    {
        if (!(a > 0) || !(b > 0)) throw DomainError("WaveguideMode: a and b must be positive");
        if (m < 0 || l < 0) throw ConfigError("WaveguideMode: mode indices must be non-negative");
        if (m == 0 && l == 0)
            throw ConfigError("WaveguideMode: invalid mode m = l = 0 (no field)");
        if (kind == ModeKind::TM && (m == 0 || l == 0))
            throw ConfigError("WaveguideMode: TM modes need m >= 1 and l >= 1 (got m = " +
                              std::to_string(m) + ", l = " + std::to_string(l) + ")");
        if (!(k_y >= 0) || !std::isfinite(k_y)) throw DomainError("WaveguideMode: k_y must be >= 0");
        if (!std::isfinite(amplitude)) throw DomainError("WaveguideMode: non-finite amplitude");
        k_x_ = m * std::numbers::pi / b;
        k_z_ = l * std::numbers::pi / a;
        gamma_ = std::hypot(k_x_, k_z_);
        omega_ = std::hypot(gamma_, k_y_);
    }

    /// Propagating mode at angular frequency omega; throws below cutoff.
    static WaveguideMode from_omega(ModeKind kind, double amplitude, double a, double b, int m,
                                    int l, double omega)
    {
        WaveguideMode probe(kind, amplitude, a, b, m, l, 0.0);
        if (!(omega > probe.gamma()))
            throw DomainError("WaveguideMode: omega " + std::to_string(omega) +
                              " is at or below cutoff " + std::to_string(probe.gamma()));
        return {kind, amplitude, a, b, m, l, std::sqrt(omega * omega - probe.gamma() * probe.gamma())};
    }

    ModeKind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    double a() const { return a_; }
    double b() const { return b_; }
    int m() const { return m_; }
    int l() const { return l_; }
    double k_x() const { return k_x_; }
    double k_y() const { return k_y_; }
    double k_z() const { return k_z_; }
    double gamma() const { return gamma_; }
    double omega() const { return omega_; }

    bool inside(double x, double z) const
    {
        constexpr double slack = 1e-12;
        return std::fabs(x) <= 0.5 * b_ * (1 + slack) && std::fabs(z) <= 0.5 * a_ * (1 + slack);
    }

    WaveguideMode with_amplitude(double amplitude) const
    {
        WaveguideMode copy = *this;
        copy.amplitude_ = amplitude;
        return copy;
    }

private:
    ModeKind kind_;
    double amplitude_;
    double a_, b_;
    int m_, l_;
    double k_y_;
    double k_x_ = 0, k_z_ = 0, gamma_ = 0, omega_ = 0;
};

struct UniformStaticField {
    Vec3 E;
    Vec3 B;
};

/// Static field of an infinite line charge along y through x = z = 0: E = q (x, 0, z) / (2 pi r^2).
struct LineChargeField {
    double linear_charge = 0;
};

using EMField = std::variant<PlaneWave, WaveguideMode, UniformStaticField, LineChargeField>;

struct FieldValue {
    Vec3 E;
    Vec3 B;
};

struct Charge {
    double q = 0;
};

/// Rest-frame electric (d) and magnetic (m) dipole moments.
struct Dipole {
    Vec3 d;
    Vec3 m;
};

using ParticleCoupling = std::variant<Charge, Dipole>;

/// Angular frequency of a field (0 for static fields).
inline double frequency(const EMField& field)
{
    if (const auto* pw = std::get_if<PlaneWave>(&field)) return pw->omega;
    if (const auto* wg = std::get_if<WaveguideMode>(&field)) return wg->omega();
    return 0.0;
}

/// Same field with every amplitude multiplied by `factor`.
inline EMField scaled(const EMField& field, double factor)
{
    struct Visitor {
        double f;
        EMField operator()(const PlaneWave& p) const { return PlaneWave(p.E0 * f, p.omega); }
        EMField operator()(const WaveguideMode& w) const { return w.with_amplitude(w.amplitude() * f); }
        EMField operator()(const UniformStaticField& u) const { return UniformStaticField{u.E * f, u.B * f}; }
        EMField operator()(const LineChargeField& c) const { return LineChargeField{c.linear_charge * f}; }
    };
    return std::visit(Visitor{factor}, field);
}

namespace detail {

struct ComplexVec3 {
    std::complex<double> x, y, z;
};

struct ModeProfile {
    ComplexVec3 E, B;
};

/// Complex spatial profiles of a guide mode at (x, z), before the exp(i psi) factor.
inline ModeProfile mode_profile(const WaveguideMode& w, double x, double z)
{
    using namespace std::complex_literals;
    const double cx = std::cos(w.k_x() * x), sx = std::sin(w.k_x() * x);
    const double cz = std::cos(w.k_z() * z), sz = std::sin(w.k_z() * z);
    const double g2 = w.gamma() * w.gamma();
    const double A = w.amplitude();
    const double kx = w.k_x(), ky = w.k_y(), kz = w.k_z(), om = w.omega();
    ModeProfile p{};
    if (w.kind() == ModeKind::TE) {
        p.B.y = A * cx * cz;
        p.B.x = -1i * (ky * kx / g2) * A * sx * cz;
        p.B.z = -1i * (ky * kz / g2) * A * cx * sz;
        p.E.x = 1i * (om * kz / g2) * A * cx * sz;
        p.E.z = -1i * (om * kx / g2) * A * sx * cz;
        p.E.y = 0.0;
    } else {
        p.E.y = A * sx * sz;
        p.E.x = 1i * (ky * kx / g2) * A * cx * sz;
        p.E.z = 1i * (ky * kz / g2) * A * sx * cz;
        p.B.x = 1i * (om * kz / g2) * A * sx * cz;
        p.B.z = -1i * (om * kx / g2) * A * cx * sz;
        p.B.y = 0.0;
    }
    return p;
}

inline Vec3 real_part(const ComplexVec3& v, std::complex<double> phase)
{
    return {(v.x * phase).real(), (v.y * phase).real(), (v.z * phase).real()};
}

inline void require_inside(const WaveguideMode& w, const Vec4& p)
{
    if (!w.inside(p.x, p.z))
        throw DomainError("waveguide field requested outside the cross-section at (x, z) = (" +
                          std::to_string(p.x) + ", " + std::to_string(p.z) + ")");
}

inline std::complex<double> guide_phase(const WaveguideMode& w, const Vec4& p, double t0)
{
    const double psi = w.k_y() * p.y - w.omega() * p.t + w.omega() * t0;
    return {std::cos(psi), std::sin(psi)};
}

} // namespace detail

/// Real E and B at spacetime point `p` for a particle emitted at time t0.
inline FieldValue eval_EB(const EMField& field, const Vec4& p, double t0 = 0.0)
{
    if (const auto* pw = std::get_if<PlaneWave>(&field)) {
        const double s = pw->E0 * std::sin(pw->omega * (p.t + t0) - pw->k() * p.y);
        return {{0, 0, s}, {s, 0, 0}};
    }
    if (const auto* wg = std::get_if<WaveguideMode>(&field)) {
        detail::require_inside(*wg, p);
        const auto prof = detail::mode_profile(*wg, p.x, p.z);
        const auto phase = detail::guide_phase(*wg, p, t0);
        return {detail::real_part(prof.E, phase), detail::real_part(prof.B, phase)};
    }
    if (const auto* u = std::get_if<UniformStaticField>(&field)) return {u->E, u->B};
    const auto& lc = std::get<LineChargeField>(field);
    const double r2 = p.x * p.x + p.z * p.z;
    if (r2 == 0.0) throw DomainError("line-charge field evaluated on the line");
    const double s = lc.linear_charge / (2.0 * std::numbers::pi * r2);
    return {{s * p.x, 0, s * p.z}, {0, 0, 0}};
}

/**
 * Temporal-gauge potential A_nu = (0, A) with A = -integral^t E dt'.
 * Monochromatic fields use the closed-form antiderivative; static fields give
 * A = -E t (+ B x r / 2 for a uniform B).
 */
inline Vec4 gauge_potential(const EMField& field, const Vec4& p, double t0 = 0.0)
{
    if (const auto* pw = std::get_if<PlaneWave>(&field)) {
        const double az = pw->E0 / pw->omega * std::cos(pw->omega * (p.t + t0) - pw->k() * p.y);
        return {0, 0, 0, az};
    }
    if (const auto* wg = std::get_if<WaveguideMode>(&field)) {
        using namespace std::complex_literals;
        detail::require_inside(*wg, p);
        const auto prof = detail::mode_profile(*wg, p.x, p.z);
        const auto phase = detail::guide_phase(*wg, p, t0) * (-1i / wg->omega());
        const Vec3 A = detail::real_part(prof.E, phase);
        return {0, A.x, A.y, A.z};
    }
    if (const auto* u = std::get_if<UniformStaticField>(&field)) {
        const Vec3 A = -p.t * u->E + 0.5 * cross(u->B, p.spatial());
        return {0, A.x, A.y, A.z};
    }
    const Vec3 E = eval_EB(field, p, t0).E;
    return {0, -p.t * E.x, -p.t * E.y, -p.t * E.z};
}

/// Aharonov-Casher connection a_nu = (-m.B - d.E, d x B - m x E).
inline Vec4 ac_connection(const Dipole& dip, const EMField& field, const Vec4& p, double t0 = 0.0)
{
    const FieldValue f = eval_EB(field, p, t0);
    const double a0 = -dot(dip.m, f.B) - dot(dip.d, f.E);
    const Vec3 a = cross(dip.d, f.B) - cross(dip.m, f.E);
    return {a0, a.x, a.y, a.z};
}

inline Vec4 ac_connection(const ParticleCoupling& c, const EMField& field, const Vec4& p, double t0 = 0.0)
{
    const auto* dip = std::get_if<Dipole>(&c);
    if (!dip) throw TypeMisuseError("ac_connection requires a Dipole coupling, got a Charge");
    return ac_connection(*dip, field, p, t0);
}

/// Aharonov-Bohm connection q A_nu.
inline Vec4 ab_connection(const Charge& ch, const EMField& field, const Vec4& p, double t0 = 0.0)
{
    return gauge_potential(field, p, t0) * ch.q;
}

inline Vec4 ab_connection(const ParticleCoupling& c, const EMField& field, const Vec4& p, double t0 = 0.0)
{
    const auto* ch = std::get_if<Charge>(&c);
    if (!ch) throw TypeMisuseError("ab_connection requires a Charge coupling, got a Dipole");
    return ab_connection(*ch, field, p, t0);
}

/// Field + coupling, plus an optional gauge gradient d_nu chi added to the AB connection.
struct Connection {
    ParticleCoupling coupling;
    EMField field;
    std::function<Vec4(const Vec4&)> gauge_gradient{};

    Vec4 operator()(const Vec4& p, double t0) const
    {
        if (const auto* ch = std::get_if<Charge>(&coupling)) {
            Vec4 a = ab_connection(*ch, field, p, t0);
            if (gauge_gradient) a = a + gauge_gradient(p) * ch->q;
            return a;
        }
        return ac_connection(std::get<Dipole>(coupling), field, p, t0);
    }
};

} // namespace acphase
