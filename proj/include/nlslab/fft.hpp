#pragma once

#include <complex>

namespace nlslab {

// Cached FFTW plans for one transform length. Plans are created once under a
// lock with FFTW_UNALIGNED, then executed through the new-array interface,
// which FFTW documents as thread-safe. Input and output must not alias.
class Fft {
 public:
  static const Fft& get(int n);

  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }
  // Unnormalised forward transform, sum_j f_j exp(-2 pi i j m / n).
  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  // Inverse transform including the 1/n factor.
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  explicit Fft(int n);

  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace nlslab
