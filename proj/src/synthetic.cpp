#include "smotenn/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace smotenn {

double standard_normal(RngStream& rng) {
  const double u1 = 1.0 - rng.uniform01();  // (0, 1]
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Dataset two_gaussians(std::size_t minority, std::size_t majority, std::size_t dim, double separation,
                      RngStream rng) {
  const std::size_t m = minority + majority;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto shuffle_rng = rng.derive("order");
  shuffle_rng.shuffle(std::span<std::size_t>(order));

  auto noise = rng.derive("noise");
  const double shift = separation / std::sqrt(static_cast<double>(dim));
  FeatureMatrix x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dim));
  std::vector<Label> labels(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_minority = order[i] < minority;
    labels[i] = is_minority ? Label::Minority : Label::Majority;
    for (std::size_t j = 0; j < dim; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = standard_normal(noise) + (is_minority ? shift : 0.0);
    }
  }
  std::vector<SampleId> ids(m);
  std::iota(ids.begin(), ids.end(), SampleId{0});
  return Dataset("two-gaussians", std::move(x), std::move(labels), std::move(ids));
}

}  // namespace smotenn
