#pragma once

#include <string>

#include "biortho/core/bigfloat.hpp"

namespace biortho {

// 17 significant digits in scientific notation; the CSV number format.
std::string format_sci(double x);
std::string format_sci(const BigFloat& x);

}  // namespace biortho
