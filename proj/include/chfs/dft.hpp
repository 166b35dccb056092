#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "grid.hpp"

namespace chfs {

namespace detail {

// One cached FFTW plan per (rank, n, sign). Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they are deterministic, cheap to build,
// and valid for any properly sized buffer via the new-array execute API.
// Plan creation is not thread-safe in FFTW; execution is.
inline fftw_plan dft_plan(int rank, int n, int sign) {
  using Key = std::tuple<int, int, int>;
  static std::map<Key, fftw_plan> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(Key{rank, n, sign});
  if (it != cache.end()) return it->second;

  std::size_t size = 1;
  for (int a = 0; a < rank; ++a) size *= static_cast<std::size_t>(n);
  std::vector<std::complex<double>> in(size), out(size);
  int dims[3] = {n, n, n};  // cube: identical extents, x contiguous
  fftw_plan p = fftw_plan_dft(rank, dims,
                              reinterpret_cast<fftw_complex*>(in.data()),
                              reinterpret_cast<fftw_complex*>(out.data()),
                              sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (p == nullptr) throw std::runtime_error("dft_plan: FFTW planning failed");
  cache.emplace(Key{rank, n, sign}, p);
  return p;
}

inline void dft_execute(const Grid& grid, int sign,
                        std::vector<std::complex<double>>& in,
                        std::vector<std::complex<double>>& out) {
  fftw_plan p = dft_plan(grid.dim, grid.n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace detail

/// Forward transform, normalized on this side:
///   fhat_k = N^(-dim) * sum_p f_p exp(+i mu k.x_p).
/// The +i analysis exponent is FFTW's BACKWARD sign.
inline SpectralField forward_dft(const GridFunction& f) {
  std::size_t size = f.grid.size();
  if (f.values.size() != size) throw std::invalid_argument("forward_dft: size mismatch");
  std::vector<std::complex<double>> in(size);
  for (std::size_t i = 0; i < size; ++i) in[i] = f.values[i];
  SpectralField out{f.grid, std::vector<std::complex<double>>(size)};
  detail::dft_execute(f.grid, FFTW_BACKWARD, in, out.coeffs);
  double scale = 1.0 / static_cast<double>(size);
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

/// Inverse transform, the unweighted synthesis
///   f_p = sum_k fhat_k exp(-i mu k.x_p),
/// which exactly inverts forward_dft. Input must be Hermitian-symmetric:
/// a relative imaginary residue above 1e-10 signals symmetry corruption.
inline GridFunction inverse_dft(const SpectralField& F) {
  std::size_t size = F.grid.size();
  if (F.coeffs.size() != size) throw std::invalid_argument("inverse_dft: size mismatch");
  std::vector<std::complex<double>> in(F.coeffs), out(size);
  detail::dft_execute(F.grid, FFTW_FORWARD, in, out);
  double re_max = 0.0, im_max = 0.0;
  for (const auto& c : out) {
    re_max = std::max(re_max, std::abs(c.real()));
    im_max = std::max(im_max, std::abs(c.imag()));
  }
  if (im_max > 1e-10 * (1.0 + re_max))
    throw std::runtime_error("inverse_dft: non-Hermitian input, imaginary residue " +
                             std::to_string(im_max));
  GridFunction f{F.grid, std::vector<double>(size)};
  for (std::size_t i = 0; i < size; ++i) f.values[i] = out[i].real();
  return f;
}

/// Project onto the Hermitian-symmetric subspace: pair (k, -k) is averaged to
/// (m, conj(m)); self-paired modes (zero/Nyquist combinations) become real.
/// Applied after every multiplier so real fields stay exactly real.
inline void hermitian_symmetrize(SpectralField& F) {
  const Grid& g = F.grid;
  std::size_t size = g.size();
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::array<int, 3> b = g.unravel(idx);
    std::array<int, 3> p{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) p[a] = b[a] == 0 ? 0 : g.n - b[a];
    std::size_t pidx = g.ravel(p);
    if (idx < pidx) {
      std::complex<double> m = 0.5 * (F.coeffs[idx] + std::conj(F.coeffs[pidx]));
      F.coeffs[idx] = m;
      F.coeffs[pidx] = std::conj(m);
    } else if (idx == pidx) {
      F.coeffs[idx] = std::complex<double>(F.coeffs[idx].real(), 0.0);
    }
  }
}

}  // namespace chfs
