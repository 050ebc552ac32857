// Seeded randomness with a pinned algorithm so that every sampled output is
// bit-reproducible across platforms and runs. Algorithm id: mt19937_64/v1
// (standard Mersenne Twister core; uniform doubles take the top 53 bits,
// normals come from Box-Muller, multinomials walk the CDF per draw).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace spinbeats {

inline constexpr const char* kRngAlgorithm = "mt19937_64/v1";

// splitmix64; used to derive independent per-job seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng64 {
public:
    explicit Rng64(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; one cached spare
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    // `shots` independent categorical draws from `probs` (need not be
    // perfectly normalized; negatives are clipped at 0).
    std::vector<std::uint64_t> multinomial(const std::vector<double>& probs, std::uint64_t shots) {
        std::vector<double> cdf(probs.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += std::max(0.0, probs[i]);
            cdf[i] = acc;
        }
        std::vector<std::uint64_t> counts(probs.size(), 0);
        if (acc <= 0.0 || probs.empty()) return counts;
        for (std::uint64_t s = 0; s < shots; ++s) {
            const double x = uniform() * acc;
            std::size_t lo = 0, hi = cdf.size() - 1;
            while (lo < hi) {
                const std::size_t mid = (lo + hi) / 2;
                if (x < cdf[mid]) hi = mid; else lo = mid + 1;
            }
            ++counts[lo];
        }
        return counts;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace spinbeats
