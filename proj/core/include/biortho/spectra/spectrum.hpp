#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace biortho::spectra {

// How a spectrum was produced, serialisable as key=value lines.
struct GeneratorDescriptor {
  std::string kind = "explicit";
  std::vector<std::pair<std::string, std::string>> params;

  std::string param(const std::string& key) const;
  std::string to_config() const;
  static GeneratorDescriptor from_config(const std::string& text);
  bool operator==(const GeneratorDescriptor&) const = default;
};

// Finite strictly increasing truncation lambda_1 < ... < lambda_N of a
// nonnegative eigenvalue sequence. Indices in the public API are 1-based.
class Spectrum {
 public:
  Spectrum(std::vector<double> values, GeneratorDescriptor generator = {});

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::size_t truncation_length() const { return values_.size(); }
  double lambda(std::size_t n) const;
  const GeneratorDescriptor& generator() const { return generator_; }

  Spectrum truncated(std::size_t n) const;
  Spectrum scaled(double factor) const;

 private:
  std::vector<double> values_;
  GeneratorDescriptor generator_;
};

// r n^2 + b n + c for n = 1..N.
Spectrum gen_quadratic(double r, double b, double c, int N);

// scale * j_{nu,n}^2 with nu = |1 - alpha| / (2 - alpha), alpha in [0, 2).
Spectrum gen_bessel_like(double alpha, double scale, int N);
double bessel_order(double alpha);

// One decimal literal per line; '#' starts a comment.
Spectrum parse_spectrum(const std::string& text);
Spectrum read_spectrum_file(const std::filesystem::path& path);
std::string format_spectrum(const Spectrum& s);
void write_spectrum_file(const Spectrum& s, const std::filesystem::path& path);

}  // namespace biortho::spectra
