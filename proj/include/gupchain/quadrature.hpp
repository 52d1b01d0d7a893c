#pragma once

#include <vector>

namespace gupchain {

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes/weights by Newton iteration on P_n. Throws std::invalid_argument
/// for order < 1.
GaussLegendreRule gauss_legendre(int order);

/// One integration panel of a composite rule. `active` marks panels on which
/// the coupling may be nonzero.
struct Panel {
  double begin = 0.0;
  double end = 0.0;
  bool active = false;
};

}  // namespace gupchain
