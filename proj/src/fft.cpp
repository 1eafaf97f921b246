#include "hsw/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace hsw {
namespace {

struct Buffer {
  fftw_complex* p = nullptr;
  explicit Buffer(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw std::bad_alloc();
  }
  ~Buffer() { fftw_free(p); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }
  // Plans are created once per (n, sign) on scratch arrays and then reused
  // through the new-array execute interface, which is thread safe.
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    Buffer a(n), b(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), a.p, b.p, sign, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<cplx> transform(std::span<const cplx> x, int sign, double scale) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  fftw_plan plan = cache().get(n, sign);
  Buffer in(n), out(n);
  std::memcpy(in.p, x.data(), n * sizeof(cplx));
  fftw_execute_dft(plan, in.p, out.p);
  std::vector<cplx> y(n);
  std::memcpy(static_cast<void*>(y.data()), out.p, n * sizeof(cplx));
  if (scale != 1.0)
    for (auto& v : y) v *= scale;
  return y;
}

}  // namespace

std::vector<cplx> fft_forward(std::span<const cplx> x) {
  return transform(x, FFTW_FORWARD, x.empty() ? 1.0 : 1.0 / static_cast<double>(x.size()));
}

std::vector<cplx> fft_inverse(std::span<const cplx> X) { return transform(X, FFTW_BACKWARD, 1.0); }

std::vector<cplx> fft_forward_real(std::span<const double> x) {
  std::vector<cplx> c(x.begin(), x.end());
  return fft_forward(c);
}

}  // namespace hsw
