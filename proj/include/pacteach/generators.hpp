#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "pacteach/types.hpp"

namespace pacteach {

// Error-rate source for the divisibility family.
struct GammaSource {
  enum class Kind { Zero, Constant, Matrix };
  Kind kind = Kind::Zero;
  double constant = 0.0;
  ArrayXXd matrix;  // ks.size() x x_max when kind == Matrix

  static GammaSource zero() { return {}; }
  static GammaSource constant_rate(double g0) {
    GammaSource s;
    s.kind = Kind::Constant;
    s.constant = g0;
    return s;
  }
  static GammaSource from_matrix(ArrayXXd m) {
    GammaSource s;
    s.kind = Kind::Matrix;
    s.matrix = std::move(m);
    return s;
  }
};

// Divisibility concepts over X = {1..x_max}: concept "c<k>" labels x
// with 1 iff k divides x. target_k must be one of ks. A Matrix gamma
// source with the wrong shape is a format error (std::invalid_argument
// naming the shapes).
Instance gen_multiples(const std::vector<int>& ks, int x_max, int target_k,
                       const GammaSource& gamma = GammaSource::zero());

// Error models for the circle family.
struct ZeroError {};
// gamma0 inside a band of the given width around the circle's edge, 0
// elsewhere.
struct BoundaryBandError {
  double width = 0.1;
  double gamma0 = 0.25;
};
// 0.5 on the edge itself, decaying linearly with distance at `scale` per
// unit, floored at 0:  gamma = max(0, 0.5 - scale * distance_to_edge).
struct DistanceProportionalError {
  double scale = 1.0;
};
using CircleErrorModel =
    std::variant<ZeroError, BoundaryBandError, DistanceProportionalError>;

// The error rate the model assigns to a point at the given distance from
// a circle's edge. Exposed so the models can be checked pointwise.
double circle_error_rate(const CircleErrorModel& model, double distance_to_edge);

struct CirclesSpec {
  Index n_concepts = 3;
  Index n_examples = 20;
  CircleErrorModel error = ZeroError{};
  std::uint64_t seed = 0;
  Index target = 0;
};

// Membership-in-a-disc concepts: centers, radii, and example points are
// drawn in the unit square from the seed, consistency is containment,
// and gamma comes from the error model applied to each point's distance
// to each circle's edge. Same seed, same instance, bit for bit.
Instance gen_circles(const CirclesSpec& spec);

struct RandomSpec {
  Index n_concepts = 3;
  Index n_examples = 6;
  double density = 0.5;    // P[consistency entry = 1]
  double gamma_max = 0.3;  // entries uniform in [0, gamma_max], must be <= 0.5
  std::uint64_t seed = 0;
};

// Unstructured instances for property tests: Bernoulli(density) labels,
// Uniform(0, gamma_max) error rates, target fixed to concept 0.
Instance gen_random(const RandomSpec& spec);

}  // namespace pacteach
