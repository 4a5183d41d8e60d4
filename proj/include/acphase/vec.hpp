/**
 * @file  vec.hpp
 * @brief Small fixed-size vectors: spatial 3-vectors and spacetime 4-tuples (t, x, y, z).
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace acphase {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Components ordered (t, x, y, z). Used for events, tangents and connections alike.
struct Vec4 {
    double t = 0, x = 0, y = 0, z = 0;

    constexpr Vec4 operator+(const Vec4& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    constexpr Vec4 operator-(const Vec4& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    constexpr Vec4 operator*(double s) const { return {t * s, x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec4&) const = default;

    constexpr Vec3 spatial() const { return {x, y, z}; }
    constexpr double operator[](std::size_t i) const
    {
        return i == 0 ? t : i == 1 ? x : i == 2 ? y : z;
    }
};

constexpr Vec4 operator*(double s, const Vec4& v) { return v * s; }

/// Componentwise pairing a0*dt + ax*dx + ay*dy + az*dz (no metric signs).
constexpr double contract(const Vec4& a, const Vec4& dx)
{
    return a.t * dx.t + a.x * dx.x + a.y * dx.y + a.z * dx.z;
}

inline double max_abs_diff(const Vec4& a, const Vec4& b)
{
    return std::fmax(std::fmax(std::fabs(a.t - b.t), std::fabs(a.x - b.x)),
                     std::fmax(std::fabs(a.y - b.y), std::fabs(a.z - b.z)));
}

} // namespace acphase
