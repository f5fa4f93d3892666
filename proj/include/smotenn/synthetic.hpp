#pragma once

#include "smotenn/dataset.hpp"
#include "smotenn/rng.hpp"

namespace smotenn {

/// Two isotropic unit-variance Gaussians. The majority is centred at the
/// origin, the minority at distance `separation` along the diagonal. Rows
/// come out in shuffled order with ids 0..m-1.
Dataset two_gaussians(std::size_t minority, std::size_t majority, std::size_t dim, double separation,
                      RngStream rng);

/// Standard normal via Box-Muller on two uniform01 draws.
double standard_normal(RngStream& rng);

}  // namespace smotenn
