#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/definetti.hpp"
#include "mmot/grid.hpp"
#include "mmot/measure.hpp"

namespace mmot::fourier {

// DFT coefficients on a uniform torus, indexed row-major by the frequency
// multi-index (n_1, ..., n_d), n_a in 0..M-1, i.e. frequencies 2*pi*n_a/L.
//
// Normalization, fixed once for the whole library:
//   function transform  f_hat(k) = sum_x f(x) e^{-i k.x} * (L/M)^d
//   measure transform   Q_hat(k) = sum_j q_j e^{-i k.x_j}        (no weight)
//   inverse             f(x)    = (1/L^d) sum_k f_hat(k) e^{+i k.x}
// With these conventions the quadratic identity reads
//   sum_{ij} ell(x_i-x_j) q_i q_j = (1/L^d) sum_k ell_hat(k) |Q_hat(k)|^2,
// i.e. the constant is 1/L^d (the discrete stand-in for (2pi)^-d).
class TorusSpectrum {
 public:
  TorusSpectrum(GridPtr grid, std::vector<std::complex<double>> values);

  const GridPtr& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> values() const noexcept { return values_; }

  // frequency vector 2*pi*n/L for flat index i
  std::vector<double> frequency(std::size_t i) const;

 private:
  GridPtr grid_;
  std::vector<std::complex<double>> values_;
};

// Forward transform of a grid function (carries the quadrature weight).
TorusSpectrum dft(const SupportGrid& torus, std::span<const double> values);
TorusSpectrum dft(const SupportGrid& torus, std::span<const std::complex<double>> values);

// Inverse transform back to grid samples.
std::vector<std::complex<double>> idft(const TorusSpectrum& spectrum);

// Fourier transform of a measure living on the torus grid (no quadrature
// weight): Q_hat(k) = sum_j q_j e^{-i k.x_j}.
TorusSpectrum measure_transform(const DiscreteMeasure& q);

// ell sampled at the minimum-image representative of each grid point, so an
// even cost stays exactly even on the torus.
std::vector<double> sample_on_torus(const CostFunction& c, const SupportGrid& torus);

struct PlancherelCheck {
  double lhs;  // direct double sum
  double rhs;  // spectral sum
  double abs_error;
};

// Quadratic identity: integral of ell(x-y) dQ dQ against its spectral form.
PlancherelCheck plancherel_quadratic(const CostFunction& ell, const DiscreteMeasure& q);

// Bilinear identity with two measures (conjugate on the second transform).
PlancherelCheck plancherel_bilinear(const CostFunction& ell, const DiscreteMeasure& q,
                                    const DiscreteMeasure& qt);

struct VarianceDecomposition {
  double mean_field;           // integral of ell against mu (x) mu, direct sum
  double variance_term;        // spectral sum of ell_hat * (Var Re Q_hat + Var Im Q_hat)
  double c_infinity;           // integral of ell against the mixture pair marginal
  double identity_error;       // |c_infinity - mean_field - variance_term|
  double mean_field_spectral;  // (1/L^d) sum ell_hat |E_nu Q_hat|^2
};

// Splits the pair cost of a de Finetti mixture into mean field plus the
// spectral variance of the component transforms over the mixing measure.
VarianceDecomposition variance_decomposition(const Mixture& nu, const CostFunction& ell);

// Random search for a mixture whose variance term is negative; succeeds only
// when the sampled spectrum of ell has negative coefficients.
std::optional<Mixture> find_negative_variance_mixture(const CostFunction& ell,
                                                      const GridPtr& torus, std::uint64_t seed,
                                                      int attempts = 1000);

}  // namespace mmot::fourier
