#pragma once

#include <string>
#include <vector>

#include "biortho/core/bigfloat.hpp"
#include "biortho/core/log_value.hpp"

namespace biortho {

enum class FamilyMethod { minimal, sai };

std::string to_string(FamilyMethod method);

// A finite set of biorthogonal functions on [0, T].
//
// minimal: coefficients[i][k] expands sigma_{indices[i]} over exp(-lambda_{k+1} t).
// sai:     coefficients[i][j] samples sigma_{indices[i]} at sample_times[j]
//          (with quadrature weights sample_weights[j]).
// residuals[i][n] is |<sigma_{indices[i]}, e_n> - delta| against the exponentials
// the family is meant to be biorthogonal to.
struct BiorthogonalFamily {
  FamilyMethod method = FamilyMethod::minimal;
  double horizon = 0.0;
  std::vector<int> indices;
  std::vector<LogValue> norms;
  std::vector<std::vector<BigFloat>> coefficients;
  std::vector<double> sample_times;
  std::vector<double> sample_weights;
  std::vector<std::vector<double>> residuals;
  double tolerance = 0.0;

  double max_residual() const;
};

}  // namespace biortho
