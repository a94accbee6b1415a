#include "nlslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace nlslab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const std::complex<double>* p) {
  // FFTW's execute interface is not const-correct; the input is not modified
  // for out-of-place complex transforms.
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

Fft::Fft(int n) : n_(n) {
  std::vector<std::complex<double>> a(n), b(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
}

// Instances live in the process-wide cache and are only destroyed at exit.
Fft::~Fft() {
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const Fft& Fft::get(int n) {
  static std::map<int, std::unique_ptr<Fft>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::unique_ptr<Fft>(new Fft(n))).first;
  }
  return *it->second;
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in), as_fftw(out));
}

void Fft::inverse(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(in), as_fftw(out));
  const double scale = 1.0 / n_;
  for (int j = 0; j < n_; ++j) out[j] *= scale;
}

}  // namespace nlslab
