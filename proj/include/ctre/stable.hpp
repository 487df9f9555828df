#pragma once

// Totally positively skewed stable variates with Laplace transform
// E[exp(-s D)] = exp(-s^beta), 0 < beta < 1. In the Samorodnitsky-Taqqu
// parametrisation this is S_beta(cos(pi beta/2)^{1/beta}, +1, 0).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctre/rng.hpp"

namespace ctre {

namespace detail {

// Kanter's representation (Kanter 1975; Devroye 1986, ch. IX.6):
//   D = sin(beta U) * sin(U)^{-1/beta} * (sin((1-beta) U) / E)^{(1-beta)/beta}
// with U uniform on (0, pi) and E unit exponential.
inline double stable_draw(Rng& rng, double beta) {
    const double u = 3.14159265358979323846 * rng.uniform_open();
    const double e = rng.exponential();
    const double ratio = std::sin((1.0 - beta) * u) / e;
    return std::sin(beta * u) * std::pow(std::sin(u), -1.0 / beta) *
           std::pow(ratio, (1.0 - beta) / beta);
}

}  // namespace detail

// n i.i.d. draws of D; deterministic given the seed.
inline std::vector<double> stable_rand(double beta, std::size_t n, std::uint64_t seed) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("stable_rand: beta must lie in (0, 1)");
    Rng rng(seed, 0);
    std::vector<double> out(n);
    for (double& d : out) d = detail::stable_draw(rng, beta);
    return out;
}

}  // namespace ctre
