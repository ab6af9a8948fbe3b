#pragma once

// Fourier machinery behind the field module. Real fields use the r2c
// half-spectrum layout: dims (nt, ny, nx/2+1), x fastest, so
//   spectral index (ix, iy, it) = ix + (nx/2+1) * (iy + ny * it).
// Transforms are unnormalized; the cached multipliers fold in 1/N.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ktcy/field.hpp"

namespace ktcy::spectral {

using Complex = std::complex<double>;

class Spectrum {
 public:
  explicit Spectrum(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  int nx_half() const { return grid_.nx() / 2 + 1; }
  std::size_t size() const { return data_.size(); }
  std::size_t index(int ix, int iy, int it) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(nx_half()) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(grid_.ny()) * static_cast<std::size_t>(it));
  }

  std::span<Complex> coefficients() { return data_; }
  std::span<const Complex> coefficients() const { return data_; }

 private:
  GridSpec grid_;
  std::vector<Complex> data_;
};

Spectrum forward(const ScalarField& u);

/// IFFT(spectrum .* multiplier). The multiplier must carry the 1/N normalization.
ScalarField synthesize(const Spectrum& s, std::span<const Complex> multiplier);

enum class Multiplier { identity, dx, dy, dt, dxx, dyy, dtt, dxy, dxt };

/// Cached per-grid multiplier over the half spectrum, including 1/N.
const std::vector<Complex>& multiplier(const GridSpec& grid, Multiplier which);

/// Signed wavenumber of storage index m on an axis with n samples; the Nyquist index maps to +n/2.
inline int signed_mode(int m, int n) { return m <= n / 2 ? m : m - n; }

/// Per-axis angular wavenumbers. first[m] = 2πk/L with the Nyquist entry zeroed;
/// second[m] = -(2πk/L)², Nyquist kept. For the x axis only m ≤ nx/2 is stored.
struct AxisWavenumbers {
  std::vector<double> first;
  std::vector<double> second;
};
struct Wavenumbers {
  AxisWavenumbers x, y, t;
};
const Wavenumbers& wavenumbers(const GridSpec& grid);

// Full complex spectrum, dims (nt, ny, nx), index ix + nx*(iy + ny*it). Unnormalized.
std::vector<Complex> full_forward(const ScalarField& u);
/// Real part of the unnormalized inverse of a full spectrum, divided by N.
ScalarField full_inverse_real(const GridSpec& grid, std::vector<Complex> spectrum);

}  // namespace ktcy::spectral
