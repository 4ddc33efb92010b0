// hapsgnss error models
// Seeded random streams, first-order Gauss-Markov satellite errors,
// Gaussian HAPS errors and elevation-dependent line-of-sight gating.
#pragma once

#include <hapsgnss/constants.hpp>
#include <hapsgnss/errors.hpp>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hapsgnss {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the sub-stream identified by `keys` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(master);
    for (const auto k : keys) {
        h = mix64(h ^ mix64(k));
    }
    return h;
}

/// A single-owner pseudo-random stream.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// -----------------------------------------------------------------------------
// Gauss-Markov
// -----------------------------------------------------------------------------

struct GaussMarkovState {
    double x = 0.0;     ///< current value [m]
    double tau = 1.0;   ///< correlation time [s]
    double sigma = 0.0; ///< stationary standard deviation [m]
    RandomStream rng;
};

/// Starts the process with x drawn from its stationary distribution N(0, σ²).
inline GaussMarkovState gm_init(double sigma, double tau, std::uint64_t seed) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("gm_init: correlation time must be positive");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("gm_init: sigma must be non-negative");
    }
    GaussMarkovState s{0.0, tau, sigma, RandomStream(seed)};
    s.x = sigma * s.rng.normal();
    return s;
}

/// Advances the process by dt using the exact discretization
/// x' = x·e^(-dt/τ) + w, w ~ N(0, σ²(1 - e^(-2dt/τ))). Returns x'.
inline double gm_step(GaussMarkovState& state, double dt) {
    if (!(dt > 0.0)) {
        throw InvalidArgument("gm_step: dt must be positive");
    }
    const double phi = std::exp(-dt / state.tau);
    const double w_sigma = state.sigma * std::sqrt(1.0 - phi * phi);
    state.x = state.x * phi + w_sigma * state.rng.normal();
    return state.x;
}

/// One draw from N(0, σ²).
inline double gaussian_error(double sigma, RandomStream& rng) {
    if (!(sigma >= 0.0)) {
        throw InvalidArgument("gaussian_error: sigma must be non-negative");
    }
    return sigma * rng.normal();
}

// -----------------------------------------------------------------------------
// Line-of-sight gating
// -----------------------------------------------------------------------------

enum class Environment { suburban, dense_urban };

inline std::string_view to_string(Environment env) {
    return env == Environment::suburban ? "suburban" : "dense_urban";
}

inline std::optional<Environment> parse_environment(std::string_view s) {
    if (s == "suburban") {
        return Environment::suburban;
    }
    if (s == "dense_urban") {
        return Environment::dense_urban;
    }
    return std::nullopt;
}

/// LOS probability as a piecewise-linear function of elevation.
struct LosProbabilityTable {
    Environment environment = Environment::suburban;
    std::vector<std::pair<double, double>> breakpoints; ///< (elevation [deg], probability)

    /// Throws InvalidArgument unless the table is usable.
    void validate() const {
        if (breakpoints.empty()) {
            throw InvalidArgument("LOS table is empty");
        }
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            const auto [el, p] = breakpoints[i];
            if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(el)) {
                throw InvalidArgument("LOS probability outside [0, 1]");
            }
            if (i > 0 && !(el > breakpoints[i - 1].first)) {
                throw InvalidArgument("LOS elevations must be strictly increasing");
            }
            if (i > 0 && p < breakpoints[i - 1].second) {
                throw InvalidArgument("LOS probability must not decrease with elevation");
            }
        }
    }

    /// Interpolated probability, clamped to the end points.
    double probability(double elevation_rad) const {
        if (breakpoints.empty()) {
            throw InvalidArgument("LOS table is empty");
        }
        const double el = elevation_rad * kRadToDeg;
        if (el <= breakpoints.front().first) {
            return breakpoints.front().second;
        }
        if (el >= breakpoints.back().first) {
            return breakpoints.back().second;
        }
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            const auto [e1, p1] = breakpoints[i];
            if (el <= e1) {
                const auto [e0, p0] = breakpoints[i - 1];
                return p0 + (p1 - p0) * (el - e0) / (e1 - e0);
            }
        }
        return breakpoints.back().second;
    }

    /// Illustrative defaults; not derived from measured data.
    static LosProbabilityTable default_for(Environment env) {
        if (env == Environment::suburban) {
            return {env, {{15.0, 0.8}, {90.0, 1.0}}};
        }
        return {env, {{15.0, 0.35}, {90.0, 1.0}}};
    }
};

/// Bernoulli draw: true when the platform is in line of sight this epoch.
inline bool los_gate(const LosProbabilityTable& table, double elevation, RandomStream& rng) {
    if (table.breakpoints.empty()) {
        throw InvalidArgument("los_gate: empty table");
    }
    if (!(elevation >= 0.0 && elevation <= kPi / 2 + 1e-12)) {
        throw InvalidArgument("los_gate: elevation outside [0, pi/2]");
    }
    return rng.uniform() < table.probability(elevation);
}

} // namespace hapsgnss
