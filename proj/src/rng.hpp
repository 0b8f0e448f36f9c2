#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace certicos::detail {

// mt19937_64 is pinned by the standard; the distributions are not. Anything
// that must reproduce across toolchains draws through these helpers instead
// of <random> distributions.

class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t bits() { return eng_(); }

    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0, 1)

    uint64_t below(uint64_t n) { return eng_() % n; }  // bias < 2^-40 for our n

    // Box-Muller
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - u01();  // (0, 1]
        double u2 = u01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace certicos::detail
