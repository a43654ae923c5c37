#include "hyperact/rng.hpp"

#include <cmath>

#include "hyperact/errors.hpp"

namespace hyperact {

double Rng::normal() {
    // Box-Muller on (0, 1] x [0, 1). 1 - uniform() avoids log(0).
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * M_PI * u2);
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw ConfigError("Rng::index: n must be nonzero");
    using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(next_u64()) * n) >> 64);
}

}  // namespace hyperact
