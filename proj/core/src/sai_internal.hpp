#pragma once

#include <functional>
#include <vector>

#include "biortho/sai/sai.hpp"

namespace biortho::sai::detail {

// f_m(x) = F_K(x) P(-x) / P(i lambda_m) on the real line, in log form.
class Integrand {
 public:
  Integrand(const spectra::Spectrum& s, int m, const MollifierParams& params);

  double lambda_m() const { return lm_; }
  double log_P_im() const { return log_P_im_; }
  const CosineProduct& cosines() const { return cp_; }
  const std::vector<double>& denominators() const { return d_; }

  double log_abs_F(double x) const;
  // ln|f(x)|; sign of the real cosine product in `sign`.
  double log_abs_f(double x, int& sign) const;
  // Bound on the log of sum_{x_j > X} 2 delta |f(x_j)|^power over the grid x_j = j delta.
  // Returns +inf when decay cannot be certified.
  double log_tail(double X, double delta, int power, double log_reference) const;

 private:
  double lm_;
  std::vector<double> d_;  // lambda_k - lambda_m, k != m
  CosineProduct cp_;
  double log_P_im_;
};

struct Scan {
  double delta = 0.0;
  std::vector<double> log_f;  // ln|f(j delta)|
  std::vector<int> sign;
  double log_integral = 0.0;  // ln(delta sum' |f|^2) over all j in Z
  double log_tail_ratio = 0.0;
  double log_peak = 0.0;
};

// Accumulates |f|^2 on the grid j * delta until the certified tail falls below
// tail_tolerance of the sum; extra_stop (if given) must also accept the cut.
using StopRule = std::function<bool(const Scan&, double x)>;
Scan scan_integrand(const Integrand& f, double delta, double tail_tolerance, const StopRule& extra_stop);

}  // namespace biortho::sai::detail
