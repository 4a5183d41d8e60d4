#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "acphase/vec.hpp"

namespace testing_support {

inline double rel_err(double got, double want)
{
    const double scale = std::max(std::fabs(want), std::fabs(got));
    return scale == 0 ? 0.0 : std::fabs(got - want) / scale;
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    acphase::Vec3 vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

private:
    std::mt19937_64 gen_;
};

/// Fourth-order central difference of f along `dir` at p.
template <class F>
auto derivative(F&& f, const acphase::Vec4& p, const acphase::Vec4& dir, double h)
{
    return (f(p - dir * (2 * h)) - f(p + dir * (2 * h)) + (f(p + dir * h) - f(p - dir * h)) * 8.0) *
           (1.0 / (12.0 * h));
}

inline const acphase::Vec4 e_t{1, 0, 0, 0}, e_x{0, 1, 0, 0}, e_y{0, 0, 1, 0}, e_z{0, 0, 0, 1};

} // namespace testing_support
