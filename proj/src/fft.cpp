#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "diffs1/errors.hpp"

namespace diffs1::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [m, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

  PlanPair get(int m) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(m);
    if (it != plans_.end()) return it->second;
    std::vector<double> re(static_cast<size_t>(m));
    std::vector<cplx> sp(static_cast<size_t>(m / 2 + 1));
    auto* c = reinterpret_cast<fftw_complex*>(sp.data());
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(m, re.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.inverse = fftw_plan_dft_c2r_1d(m, c, re.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.forward || !p.inverse) throw InternalConsistencyError("fftw planning failed");
    plans_.emplace(m, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void forward_half_spectrum(std::span<const double> in, std::span<cplx> out) {
  const int m = static_cast<int>(in.size());
  if (out.size() != static_cast<size_t>(m / 2 + 1))
    throw ConfigurationError("forward_half_spectrum: output length mismatch");
  const PlanPair p = cache().get(m);
  // r2c does not modify its input.
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse_half_spectrum(std::span<const cplx> in, std::span<double> out) {
  const int m = static_cast<int>(out.size());
  if (in.size() != static_cast<size_t>(m / 2 + 1))
    throw ConfigurationError("inverse_half_spectrum: input length mismatch");
  const PlanPair p = cache().get(m);
  // c2r overwrites its input.
  std::vector<cplx> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace diffs1::detail
