#include "biortho/core/format.hpp"

#include <cmath>
#include <cstdio>

namespace biortho {

std::string format_sci(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string format_sci(const BigFloat& x) {
  if (x.is_zero()) return format_sci(0.0);
  return x.to_string(17);
}

}  // namespace biortho
