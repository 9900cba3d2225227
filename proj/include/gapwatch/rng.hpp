#pragma once

#include <cstdint>
#include <random>

namespace gapwatch {

/// splitmix64 output function (Steele/Lea/Flood). Used only to derive
/// per-stream seeds; the stream generator itself is std::mt19937_64, whose
/// output sequence is fully specified by the standard.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed for the noise stream of one vehicle. Streams are independent of the
/// platoon size: adding a vehicle never perturbs another vehicle's draws.
inline std::uint64_t vehicle_stream_seed(std::uint64_t run_seed, int vehicle_id) {
    return splitmix64(run_seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(vehicle_id + 1)));
}

/// Standard-normal sampler: mt19937_64 + Box-Muller on explicitly constructed
/// uniforms. std::normal_distribution is implementation-defined, so it is not
/// used anywhere randomness must be reproducible.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    // Uniform in (0,1): top 53 bits, offset by half an ulp so log() never sees 0.
    double next_uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace gapwatch
