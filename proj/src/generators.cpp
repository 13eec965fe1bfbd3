#include "pacteach/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pacteach/instance.hpp"
#include "pacteach/rng.hpp"

namespace pacteach {

Instance gen_multiples(const std::vector<int>& ks, int x_max, int target_k,
                       const GammaSource& gamma) {
  if (ks.empty()) throw std::invalid_argument("need at least one divisor");
  if (x_max < 1) throw std::invalid_argument("x_max must be at least 1");
  for (const int k : ks) {
    if (k < 1) throw std::invalid_argument("divisors must be positive");
  }

  const Index n = static_cast<Index>(ks.size());
  const Index m = x_max;

  Instance inst;
  inst.consistency.resize(n, m);
  inst.gamma.resize(n, m);
  inst.concept_ids.reserve(static_cast<std::size_t>(n));
  inst.example_ids.reserve(static_cast<std::size_t>(m));

  bool target_found = false;
  for (Index c = 0; c < n; ++c) {
    const int k = ks[static_cast<std::size_t>(c)];
    inst.concept_ids.push_back("c" + std::to_string(k));
    if (k == target_k) {
      inst.target = c;
      target_found = true;
    }
  }
  if (!target_found) {
    throw std::invalid_argument("target divisor " + std::to_string(target_k) +
                                " is not among the generated concepts");
  }
  for (Index x = 0; x < m; ++x) {
    inst.example_ids.push_back(std::to_string(x + 1));
  }
  for (Index c = 0; c < n; ++c) {
    const int k = ks[static_cast<std::size_t>(c)];
    for (Index x = 0; x < m; ++x) {
      inst.consistency(c, x) = (x + 1) % k == 0 ? 1 : 0;
    }
  }

  switch (gamma.kind) {
    case GammaSource::Kind::Zero:
      inst.gamma.setZero();
      break;
    case GammaSource::Kind::Constant:
      if (!(gamma.constant >= 0.0 && gamma.constant <= 1.0)) {
        throw std::invalid_argument("constant error rate must lie in [0, 1]");
      }
      inst.gamma.setConstant(gamma.constant);
      break;
    case GammaSource::Kind::Matrix:
      if (gamma.matrix.rows() != n || gamma.matrix.cols() != m) {
        throw std::invalid_argument(
            "error-rate matrix is " + std::to_string(gamma.matrix.rows()) + "x" +
            std::to_string(gamma.matrix.cols()) + " but the instance needs " +
            std::to_string(n) + "x" + std::to_string(m));
      }
      inst.gamma = gamma.matrix;
      break;
  }

  validate_instance(inst);
  return inst;
}

double circle_error_rate(const CircleErrorModel& model, double distance_to_edge) {
  if (distance_to_edge < 0.0) {
    throw std::invalid_argument("distance to edge cannot be negative");
  }
  if (std::holds_alternative<ZeroError>(model)) return 0.0;
  if (const auto* band = std::get_if<BoundaryBandError>(&model)) {
    return distance_to_edge <= band->width ? band->gamma0 : 0.0;
  }
  const auto& prop = std::get<DistanceProportionalError>(model);
  return std::max(0.0, 0.5 - prop.scale * distance_to_edge);
}

Instance gen_circles(const CirclesSpec& spec) {
  if (spec.n_concepts < 1 || spec.n_examples < 1) {
    throw std::invalid_argument("need at least one circle and one point");
  }
  if (spec.target < 0 || spec.target >= spec.n_concepts) {
    throw std::invalid_argument("target index out of range");
  }
  if (const auto* band = std::get_if<BoundaryBandError>(&spec.error)) {
    if (band->width < 0.0) throw std::invalid_argument("band width cannot be negative");
    if (!(band->gamma0 >= 0.0 && band->gamma0 <= 1.0)) {
      throw std::invalid_argument("band error rate must lie in [0, 1]");
    }
  }
  if (const auto* prop = std::get_if<DistanceProportionalError>(&spec.error)) {
    if (prop->scale < 0.0) throw std::invalid_argument("decay scale cannot be negative");
  }

  SplitMix64 rng(spec.seed);
  const Index n = spec.n_concepts;
  const Index m = spec.n_examples;

  // Circles first, then points: the draw order is fixed so a seed pins
  // the whole instance down.
  std::vector<double> cx(static_cast<std::size_t>(n)), cy(static_cast<std::size_t>(n)),
      cr(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; ++c) {
    cx[static_cast<std::size_t>(c)] = rng.uniform();
    cy[static_cast<std::size_t>(c)] = rng.uniform();
    cr[static_cast<std::size_t>(c)] = 0.1 + 0.3 * rng.uniform();  // radii in [0.1, 0.4]
  }
  std::vector<double> px(static_cast<std::size_t>(m)), py(static_cast<std::size_t>(m));
  for (Index x = 0; x < m; ++x) {
    px[static_cast<std::size_t>(x)] = rng.uniform();
    py[static_cast<std::size_t>(x)] = rng.uniform();
  }

  Instance inst;
  inst.target = spec.target;
  inst.consistency.resize(n, m);
  inst.gamma.resize(n, m);
  for (Index c = 0; c < n; ++c) {
    inst.concept_ids.push_back("c" + std::to_string(c));
  }
  for (Index x = 0; x < m; ++x) {
    inst.example_ids.push_back("p" + std::to_string(x));
  }
  for (Index c = 0; c < n; ++c) {
    for (Index x = 0; x < m; ++x) {
      const double dx = px[static_cast<std::size_t>(x)] - cx[static_cast<std::size_t>(c)];
      const double dy = py[static_cast<std::size_t>(x)] - cy[static_cast<std::size_t>(c)];
      const double dist_to_center = std::sqrt(dx * dx + dy * dy);
      const double r = cr[static_cast<std::size_t>(c)];
      inst.consistency(c, x) = dist_to_center <= r ? 1 : 0;
      inst.gamma(c, x) = circle_error_rate(spec.error, std::abs(dist_to_center - r));
    }
  }

  validate_instance(inst);
  return inst;
}

Instance gen_random(const RandomSpec& spec) {
  if (spec.n_concepts < 1 || spec.n_examples < 1) {
    throw std::invalid_argument("need at least one concept and one example");
  }
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) {
    throw std::invalid_argument("density must lie in [0, 1]");
  }
  if (!(spec.gamma_max >= 0.0 && spec.gamma_max <= 0.5)) {
    throw std::invalid_argument("gamma_max must lie in [0, 0.5]");
  }

  SplitMix64 rng(spec.seed);
  const Index n = spec.n_concepts;
  const Index m = spec.n_examples;

  Instance inst;
  inst.target = 0;
  inst.consistency.resize(n, m);
  inst.gamma.resize(n, m);
  for (Index c = 0; c < n; ++c) {
    inst.concept_ids.push_back("c" + std::to_string(c));
  }
  for (Index x = 0; x < m; ++x) {
    inst.example_ids.push_back("x" + std::to_string(x));
  }
  // Labels first, then error rates, row by row.
  for (Index c = 0; c < n; ++c) {
    for (Index x = 0; x < m; ++x) {
      inst.consistency(c, x) = rng.uniform() < spec.density ? 1 : 0;
    }
  }
  for (Index c = 0; c < n; ++c) {
    for (Index x = 0; x < m; ++x) {
      inst.gamma(c, x) = spec.gamma_max * rng.uniform();
    }
  }

  validate_instance(inst);
  return inst;
}

}  // namespace pacteach
