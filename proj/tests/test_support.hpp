#pragma once

#include <cmath>
#include <random>

#include "esmem/qlinalg.hpp"

namespace esmem::testing {

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    ComplexMatrix h(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        h(r, r) = n(rng);
        for (std::size_t c = r + 1; c < dim; ++c) {
            h(r, c) = Complex{n(rng), n(rng)};
            h(c, r) = std::conj(h(r, c));
        }
    }
    return h;
}

inline ComplexMatrix random_matrix(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    ComplexMatrix m(dim);
    for (auto& z : m.entries()) z = Complex{n(rng), n(rng)};
    return m;
}

inline std::array<double, 3> random_unit_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    std::array<double, 3> v{n(rng), n(rng), n(rng)};
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (double& x : v) x /= len;
    return v;
}

}  // namespace esmem::testing
