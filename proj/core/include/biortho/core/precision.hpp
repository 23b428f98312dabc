#pragma once

#include "biortho/core/bigfloat.hpp"

namespace biortho {

// Working precision and the escalation policy shared by every high-precision
// routine. A routine that cannot meet residual_target retries with
// working_digits multiplied by escalation_factor, at most max_escalations times.
struct PrecisionContext {
  int working_digits = 50;
  double residual_target = 1e-30;
  int max_escalations = 3;
  int escalation_factor = 2;

  void validate() const;
  Bits bits() const { return bits_for_digits(working_digits); }
  PrecisionContext escalated() const;
  PrecisionContext with_digits(int digits) const;
};

}  // namespace biortho
