#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adapt {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Distance in the horizontal plane.
double horizontal_distance(const Vec3& a, const Vec3& b);

enum class Regime : std::size_t { takeoff = 0, cruise = 1, landing = 2 };

inline constexpr std::array<Regime, 3> kAllRegimes{Regime::takeoff, Regime::cruise,
                                                   Regime::landing};

std::string_view regime_name(Regime r);
Regime parse_regime(std::string_view name);

/// Fixed-size container indexed by flight regime.
template <class T>
struct PerRegime {
    std::array<T, 3> values{};

    T& operator[](Regime r) { return values[static_cast<std::size_t>(r)]; }
    const T& operator[](Regime r) const { return values[static_cast<std::size_t>(r)]; }

    friend bool operator==(const PerRegime&, const PerRegime&) = default;
};

using RegimePowers = PerRegime<double>;  // watts

// Error taxonomy. Argument errors use std::invalid_argument directly.

/// A physical model parameter makes an operation undefined.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or hyperparameters.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No feasible path exists for the given budget.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance or trace file could not be parsed or failed validation.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace adapt
