#ifndef CSRP_RNG_HPP
#define CSRP_RNG_HPP

#include <cmath>
#include <cstdint>

namespace csrp {

// Self-contained splitmix64 generator. We avoid <random> distributions so
// that streams are reproducible independent of the standard library build,
// and so that sharded consumers (Monte Carlo) can derive independent
// counter-based streams from one seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent stream `k` of a master seed.
    static Rng stream(std::uint64_t seed, std::uint64_t k) {
        return Rng(mix(seed + 0x9E3779B97F4A7C15ULL * (k + 1)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace csrp

#endif
