#include "biortho/core/family.hpp"

#include <algorithm>

namespace biortho {

std::string to_string(FamilyMethod method) { return method == FamilyMethod::minimal ? "minimal" : "sai"; }

double BiorthogonalFamily::max_residual() const {
  double worst = 0.0;
  for (const auto& row : residuals) {
    for (double r : row) worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace biortho
