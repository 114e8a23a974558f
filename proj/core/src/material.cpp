#include "gspm/material.hpp"

#include "gspm/errors.hpp"

namespace gspm {

void validate(const MaterialParams& p) {
  if (!(p.Ms > 0.0)) throw ValidationError("Ms must be > 0");
  if (!(p.mu0 > 0.0)) throw ValidationError("mu0 must be > 0");
  if (!(p.gamma > 0.0)) throw ValidationError("gamma must be > 0");
  if (!(p.L > 0.0)) throw ValidationError("L must be > 0");
  if (p.Q() < 0.0) throw ValidationError("Q must be >= 0");
  if (!(p.eps() > 0.0)) throw ValidationError("eps must be > 0");
  if (p.alpha < 0.0) throw ValidationError("alpha must be >= 0");
}

}  // namespace gspm
