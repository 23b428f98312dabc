#include "biortho/core/precision.hpp"

#include "biortho/core/errors.hpp"

namespace biortho {

void PrecisionContext::validate() const {
  require(working_digits >= 30, "working_digits must be at least 30", ErrorKind::invalid_argument);
  require(residual_target > 0.0 && residual_target < 1.0, "residual_target must lie in (0, 1)",
          ErrorKind::invalid_argument);
  require(max_escalations >= 0, "max_escalations must be non-negative", ErrorKind::invalid_argument);
  require(escalation_factor >= 2, "escalation_factor must be at least 2", ErrorKind::invalid_argument);
}

PrecisionContext PrecisionContext::escalated() const {
  PrecisionContext next = *this;
  next.working_digits = working_digits * escalation_factor;
  return next;
}

PrecisionContext PrecisionContext::with_digits(int digits) const {
  PrecisionContext next = *this;
  next.working_digits = digits;
  return next;
}

}  // namespace biortho
