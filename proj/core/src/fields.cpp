#include "gspm/fields.hpp"

#include <cmath>

namespace gspm {

bool VectorField::all_finite() const {
  for (const auto& plane : comp) {
    for (double v : plane) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

double VectorField::max_unit_deviation() const {
  double worst = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    const double nrm = std::sqrt(comp[0][i] * comp[0][i] + comp[1][i] * comp[1][i] +
                                 comp[2][i] * comp[2][i]);
    worst = std::max(worst, std::abs(nrm - 1.0));
  }
  return worst;
}

}  // namespace gspm
