#ifndef PANELTAIL_RNG_HPP
#define PANELTAIL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "paneltail/common.hpp"

namespace paneltail {

// SplitMix64 finalizer. Used to derive independent sub-stream seeds from a
// master seed and a (domain, index) counter, so that stream assignment does
// not depend on evaluation order.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t master,
                                       std::uint64_t domain,
                                       std::uint64_t index) noexcept {
    return mix64(mix64(mix64(master) ^ domain) ^ index);
}

// Stream domains used by the panel simulator and the Monte Carlo engine.
namespace stream {
inline constexpr std::uint64_t coefficients = 0x636f656666ULL;  // "coeff"
inline constexpr std::uint64_t common_shocks = 0x636f6d6d6fULL; // "commo"
inline constexpr std::uint64_t series = 0x7365726965ULL;        // "serie"
inline constexpr std::uint64_t weights = 0x7765696768ULL;       // "weigh"
inline constexpr std::uint64_t replication = 0x7265706c69ULL;   // "repli"
}  // namespace stream

// A seeded random stream with the samplers this project needs. The raw
// engine is std::mt19937_64 (fully specified by the standard); all variate
// transforms are implemented here because the std::*_distribution mappings
// are implementation-defined and would break bit-reproducibility claims.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    static Rng substream(std::uint64_t master, std::uint64_t domain,
                         std::uint64_t index) {
        return Rng(substream_seed(master, domain, index));
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on the open interval (0,1); never returns an endpoint.
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

    // Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 handled by the
    // boost relation Gamma(s) = Gamma(s+1) * U^(1/s).
    double gamma(double shape) {
        if (!(shape > 0.0)) throw parameter_error("gamma: shape must be > 0");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    // Student-t with df degrees of freedom, rescaled to unit variance
    // (requires df > 2).
    double student_t_unit(double df) {
        if (!(df > 2.0))
            throw parameter_error("student_t: df must exceed 2 for unit variance");
        const double z = normal();
        const double chi2 = 2.0 * gamma(0.5 * df);
        return z * std::sqrt(df / chi2) * std::sqrt((df - 2.0) / df);
    }

    double rademacher() { return (eng_() >> 63) ? 1.0 : -1.0; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace paneltail

#endif
