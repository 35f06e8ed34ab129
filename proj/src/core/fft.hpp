#ifndef AFFECT_CORE_FFT_HPP
#define AFFECT_CORE_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace affect {

// Complex DFT (FFTW backend, any length). inverse=true applies the unscaled
// backward transform; callers divide by n where needed.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x,
                                      bool inverse = false);

std::vector<std::complex<double>> fft_real(std::span<const double> x);

// One-sided power spectrum |X_k|^2, k = 0..floor(n/2).
std::vector<double> power_spectrum(std::span<const double> x);

} // namespace affect

#endif
