#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace semiwave::detail {

inline fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

/// Process-wide cache of FFTW plans. Planning is serialized; execution uses
/// the new-array interface on caller-owned buffers (plans are created with
/// FFTW_UNALIGNED so any buffer is admissible). Transforms are unnormalized.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans cache;
    return cache;
  }

  void transform_1d(std::vector<std::complex<double>>& data, int sign) {
    fftw_plan p = plan({data.size(), 1, sign});
    fftw_execute_dft(p, as_fftw(data.data()), as_fftw(data.data()));
  }

  // Row-major data, ny rows of nx values.
  void transform_2d(std::vector<std::complex<double>>& data, std::size_t ny, std::size_t nx,
                    int sign) {
    fftw_plan p = plan({ny, nx, sign});
    fftw_execute_dft(p, as_fftw(data.data()), as_fftw(data.data()));
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

 private:
  FftPlans() = default;
  ~FftPlans() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

  struct Key {
    std::size_t d0, d1;
    int sign;
    auto operator<=>(const Key&) const = default;
  };

  fftw_plan plan(Key key) {
    std::lock_guard lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(key.d0 * key.d1);
    fftw_plan p;
    if (key.d1 == 1) {
      p = fftw_plan_dft_1d(static_cast<int>(key.d0), as_fftw(scratch.data()),
                           as_fftw(scratch.data()), key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
      p = fftw_plan_dft_2d(static_cast<int>(key.d0), static_cast<int>(key.d1),
                           as_fftw(scratch.data()), as_fftw(scratch.data()), key.sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    plans_.emplace(key, p);
    return p;
  }

  std::mutex mu_;
  std::map<Key, fftw_plan> plans_;
};

inline void fft_forward_1d(std::vector<std::complex<double>>& data) {
  FftPlans::instance().transform_1d(data, FFTW_FORWARD);
}
inline void fft_backward_1d(std::vector<std::complex<double>>& data) {
  FftPlans::instance().transform_1d(data, FFTW_BACKWARD);
}
inline void fft_forward_2d(std::vector<std::complex<double>>& data, std::size_t ny,
                           std::size_t nx) {
  FftPlans::instance().transform_2d(data, ny, nx, FFTW_FORWARD);
}
inline void fft_backward_2d(std::vector<std::complex<double>>& data, std::size_t ny,
                            std::size_t nx) {
  FftPlans::instance().transform_2d(data, ny, nx, FFTW_BACKWARD);
}

}  // namespace semiwave::detail
