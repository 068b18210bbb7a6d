#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace minresmon {

/// Deterministic random stream used by the problem generators and tests.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard,
/// with hand-rolled variate mappings so that draws are bit-identical across
/// platforms and standard libraries:
///  - uniform(): centered 53-bit mapping onto the open interval (0,1)
///  - normal(): Box-Muller transform, consuming two uniforms per pair and
///    caching the second deviate
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw strictly inside (0,1).
    double uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal draw (Box-Muller).
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi_ * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    static constexpr double pi_ = 3.14159265358979323846;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace minresmon
