#include "mmot/fourier.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "mmot/errors.hpp"

namespace mmot::fourier {

namespace {

using cd = std::complex<double>;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// in-place radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse (no scaling)
void fft_pow2(std::vector<cd>& a, double sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const cd wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cd w(1.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cd u = a[i + j];
        const cd v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void dft_naive(std::vector<cd>& a, double sign) {
  const std::size_t n = a.size();
  std::vector<cd> out(n, cd(0.0));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(j) / static_cast<double>(n);
      out[k] += a[j] * cd(std::cos(ang), std::sin(ang));
    }
  }
  a = std::move(out);
}

void transform_axis(std::vector<cd>& a, double sign) {
  if (is_power_of_two(a.size())) {
    fft_pow2(a, sign);
  } else {
    dft_naive(a, sign);
  }
}

// d-dimensional transform by axis passes over the row-major array
std::vector<cd> transform(const SupportGrid& torus, std::vector<cd> data, double sign) {
  const int d = torus.dimension();
  const std::size_t M = static_cast<std::size_t>(torus.points_per_axis());
  std::size_t stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    const std::size_t block = stride * M;
    std::vector<cd> line(M);
    for (std::size_t base = 0; base < data.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::size_t j = 0; j < M; ++j) line[j] = data[base + off + j * stride];
        transform_axis(line, sign);
        for (std::size_t j = 0; j < M; ++j) data[base + off + j * stride] = line[j];
      }
    }
    stride *= M;
  }
  return data;
}

void require_torus(const SupportGrid& grid, const char* what) {
  if (!grid.is_uniform_torus()) {
    throw DomainError(std::string(what) + ": uniform periodic grid required");
  }
}

double quadrature_weight(const SupportGrid& torus) {
  const double h = torus.period() / torus.points_per_axis();
  double w = 1.0;
  for (int a = 0; a < torus.dimension(); ++a) w *= h;
  return w;
}

double inverse_volume(const SupportGrid& torus) {
  double v = 1.0;
  for (int a = 0; a < torus.dimension(); ++a) v *= torus.period();
  return 1.0 / v;
}

}  // namespace

TorusSpectrum::TorusSpectrum(GridPtr grid, std::vector<cd> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require_torus(*grid_, "TorusSpectrum");
  if (values_.size() != grid_->size()) throw DomainError("TorusSpectrum: size mismatch");
}

std::vector<double> TorusSpectrum::frequency(std::size_t i) const {
  const int d = grid_->dimension();
  const int M = grid_->points_per_axis();
  const double base = 2.0 * std::numbers::pi / grid_->period();
  std::vector<double> freq(d);
  for (int a = d - 1; a >= 0; --a) {
    freq[a] = base * static_cast<double>(i % M);
    i /= static_cast<std::size_t>(M);
  }
  return freq;
}

TorusSpectrum dft(const SupportGrid& torus, std::span<const double> values) {
  require_torus(torus, "dft");
  if (values.size() != torus.size()) throw DomainError("dft: value count mismatch");
  std::vector<cd> data(values.begin(), values.end());
  auto out = transform(torus, std::move(data), -1.0);
  const double w = quadrature_weight(torus);
  for (auto& v : out) v *= w;
  return TorusSpectrum(std::make_shared<const SupportGrid>(torus), std::move(out));
}

TorusSpectrum dft(const SupportGrid& torus, std::span<const cd> values) {
  require_torus(torus, "dft");
  if (values.size() != torus.size()) throw DomainError("dft: value count mismatch");
  std::vector<cd> data(values.begin(), values.end());
  auto out = transform(torus, std::move(data), -1.0);
  const double w = quadrature_weight(torus);
  for (auto& v : out) v *= w;
  return TorusSpectrum(std::make_shared<const SupportGrid>(torus), std::move(out));
}

std::vector<cd> idft(const TorusSpectrum& spectrum) {
  std::vector<cd> data(spectrum.values().begin(), spectrum.values().end());
  auto out = transform(*spectrum.grid(), std::move(data), +1.0);
  const double scale = inverse_volume(*spectrum.grid());
  for (auto& v : out) v *= scale;
  return out;
}

TorusSpectrum measure_transform(const DiscreteMeasure& q) {
  require_torus(*q.grid(), "measure_transform");
  std::vector<cd> data(q.weights().begin(), q.weights().end());
  auto out = transform(*q.grid(), std::move(data), -1.0);
  return TorusSpectrum(q.grid(), std::move(out));
}

std::vector<double> sample_on_torus(const CostFunction& c, const SupportGrid& torus) {
  require_torus(torus, "sample_on_torus");
  std::vector<double> out(torus.size());
  for (std::size_t i = 0; i < torus.size(); ++i) {
    const auto z = torus.wrap(torus.point(i));
    out[i] = c.ell(z);
  }
  return out;
}

PlancherelCheck plancherel_quadratic(const CostFunction& ell, const DiscreteMeasure& q) {
  return plancherel_bilinear(ell, q, q);
}

PlancherelCheck plancherel_bilinear(const CostFunction& ell, const DiscreteMeasure& q,
                                    const DiscreteMeasure& qt) {
  if (!same_grid(q.grid(), qt.grid())) throw DomainError("plancherel: grid mismatch");
  const auto& torus = *q.grid();
  require_torus(torus, "plancherel");

  double lhs = 0.0;
  const std::size_t m = torus.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double qi = q.weight(i);
    if (qi == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      const double qj = qt.weight(j);
      if (qj == 0.0) continue;
      lhs += ell.pair_value(torus, i, j) * qi * qj;
    }
  }

  const auto ell_hat = dft(torus, sample_on_torus(ell, torus));
  const auto q_hat = measure_transform(q);
  const auto qt_hat = measure_transform(qt);
  cd total(0.0);
  for (std::size_t k = 0; k < ell_hat.values().size(); ++k) {
    total += ell_hat.values()[k] * q_hat.values()[k] * std::conj(qt_hat.values()[k]);
  }
  const double rhs = (total * inverse_volume(torus)).real();
  return PlancherelCheck{lhs, rhs, std::abs(lhs - rhs)};
}

VarianceDecomposition variance_decomposition(const Mixture& nu, const CostFunction& ell) {
  const auto& torus = *nu.grid();
  require_torus(torus, "variance_decomposition");

  const auto mu = mixture_mean(nu);
  const double mean_field = pair_cost_integral(ell, tensor_pair(mu, mu));
  const double c_infinity = pair_cost_integral(ell, mixture_pair_marginal(nu));

  const auto ell_hat = dft(torus, sample_on_torus(ell, torus));
  const std::size_t K = ell_hat.values().size();

  std::vector<double> mean_re(K, 0.0), mean_im(K, 0.0), mean_sq(K, 0.0);
  for (std::size_t a = 0; a < nu.size(); ++a) {
    const double va = nu.weight(a);
    if (va == 0.0) continue;
    const auto q_hat = measure_transform(nu.component(a));
    for (std::size_t k = 0; k < K; ++k) {
      const cd v = q_hat.values()[k];
      mean_re[k] += va * v.real();
      mean_im[k] += va * v.imag();
      mean_sq[k] += va * std::norm(v);
    }
  }

  const double inv_vol = inverse_volume(torus);
  double variance_term = 0.0;
  double mf_spectral = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double lk = ell_hat.values()[k].real();
    const double mean_norm2 = mean_re[k] * mean_re[k] + mean_im[k] * mean_im[k];
    variance_term += lk * (mean_sq[k] - mean_norm2);
    mf_spectral += lk * mean_norm2;
  }
  variance_term *= inv_vol;
  mf_spectral *= inv_vol;

  const double err = std::abs(c_infinity - mean_field - variance_term);
  return VarianceDecomposition{mean_field, variance_term, c_infinity, err, mf_spectral};
}

std::optional<Mixture> find_negative_variance_mixture(const CostFunction& ell,
                                                      const GridPtr& torus, std::uint64_t seed,
                                                      int attempts) {
  require_torus(*torus, "find_negative_variance_mixture");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, torus->size() - 1);
  for (int t = 0; t < attempts; ++t) {
    // pair of distinct Dirac components mixed evenly; sharp measures excite
    // the high-frequency part of the spectrum where indefinite costs go
    // negative
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) continue;
    std::vector<DiscreteMeasure> comps{DiscreteMeasure::dirac(torus, i),
                                       DiscreteMeasure::dirac(torus, j)};
    Mixture nu(std::move(comps), {0.5, 0.5});
    if (variance_decomposition(nu, ell).variance_term < -1e-12) return nu;
  }
  return std::nullopt;
}

}  // namespace mmot::fourier
