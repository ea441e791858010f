#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dalab {

// Stack-allocated dynamic vectors/matrices; torus dimension never exceeds 8.
constexpr int kMaxDim = 8;
using VecX = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using MatX = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

// Quintic smoothstep: 0 at s<=0, 1 at s>=1, C^2 at the ends.
inline double smoothstep5(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

inline double smoothstep5_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

// Plateau bump: 1 on |s|<=a, 0 on |s|>=b, smooth in between.
inline double plateau_bump(double s, double a, double b) {
    double t = (std::abs(s) - a) / (b - a);
    return 1.0 - smoothstep5(t);
}

inline double plateau_bump_deriv(double s, double a, double b) {
    double as = std::abs(s);
    if (as <= a || as >= b) return 0.0;
    double sign = s >= 0.0 ? 1.0 : -1.0;
    return -sign * smoothstep5_deriv((as - a) / (b - a)) / (b - a);
}

// splitmix64: deterministic sub-seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro-free uniform doubles from a 64-bit PRNG state; stable across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds decorrelate
        for (int i = 0; i < 4; ++i) splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Rng fork(std::uint64_t salt) {
        std::uint64_t s = state_ ^ (salt * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
        return Rng(s);
    }

private:
    std::uint64_t state_;
};

}  // namespace dalab
