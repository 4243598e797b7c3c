#include "mzk/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace mzk::fft {
namespace {

enum class Kind { r2c, c2r, c2c_forward, c2c_backward };

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Plans are made on scratch buffers with FFTW_UNALIGNED so they can be
// executed on any Eigen allocation afterwards.
fftw_plan plan_for(Kind kind, int n_x, int n_y) {
  static std::mutex mutex;
  static std::map<std::tuple<Kind, int, int>, PlanHandle> cache;

  std::lock_guard lock(mutex);
  auto key = std::make_tuple(kind, n_x, n_y);
  if (auto it = cache.find(key); it != cache.end()) return it->second.get();

  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  switch (kind) {
    case Kind::r2c: {
      RealArray in(n_x, n_y);
      ComplexArray out(n_x, n_y / 2 + 1);
      plan = fftw_plan_dft_r2c_2d(n_x, n_y, in.data(), as_fftw(out.data()), flags);
      break;
    }
    case Kind::c2r: {
      ComplexArray in(n_x, n_y / 2 + 1);
      RealArray out(n_x, n_y);
      plan = fftw_plan_dft_c2r_2d(n_x, n_y, as_fftw(in.data()), out.data(), flags);
      break;
    }
    case Kind::c2c_forward:
    case Kind::c2c_backward: {
      ComplexArray in(n_x, n_y), out(n_x, n_y);
      plan = fftw_plan_dft_2d(n_x, n_y, as_fftw(in.data()), as_fftw(out.data()),
                              kind == Kind::c2c_forward ? FFTW_FORWARD : FFTW_BACKWARD,
                              flags);
      break;
    }
  }
  cache.emplace(key, PlanHandle(plan));
  return plan;
}

}  // namespace

ComplexArray forward(const RealArray& physical) {
  const int n_x = static_cast<int>(physical.rows());
  const int n_y = static_cast<int>(physical.cols());
  ComplexArray out(n_x, n_y / 2 + 1);
  // r2c leaves its input intact, the const_cast only satisfies the C API.
  fftw_execute_dft_r2c(plan_for(Kind::r2c, n_x, n_y),
                       const_cast<double*>(physical.data()), as_fftw(out.data()));
  return out;
}

RealArray inverse(const ComplexArray& half_spectrum, int n_y) {
  const int n_x = static_cast<int>(half_spectrum.rows());
  ComplexArray scratch = half_spectrum;  // c2r destroys its input
  RealArray out(n_x, n_y);
  fftw_execute_dft_c2r(plan_for(Kind::c2r, n_x, n_y), as_fftw(scratch.data()), out.data());
  out *= 1.0 / (static_cast<double>(n_x) * n_y);
  return out;
}

ComplexArray forward_full(const ComplexArray& samples) {
  const int n_x = static_cast<int>(samples.rows());
  const int n_y = static_cast<int>(samples.cols());
  ComplexArray out(n_x, n_y);
  fftw_execute_dft(plan_for(Kind::c2c_forward, n_x, n_y),
                   as_fftw(const_cast<Complex*>(samples.data())), as_fftw(out.data()));
  return out;
}

ComplexArray inverse_full(const ComplexArray& spectrum) {
  const int n_x = static_cast<int>(spectrum.rows());
  const int n_y = static_cast<int>(spectrum.cols());
  ComplexArray out(n_x, n_y);
  fftw_execute_dft(plan_for(Kind::c2c_backward, n_x, n_y),
                   as_fftw(const_cast<Complex*>(spectrum.data())), as_fftw(out.data()));
  out *= 1.0 / (static_cast<double>(n_x) * n_y);
  return out;
}

}  // namespace mzk::fft
