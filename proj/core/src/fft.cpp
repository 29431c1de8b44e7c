#include "bohm/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

namespace bohm::fft {
namespace {

// FFTW's planner is not re-entrant, so plan creation is serialized here.
// fftw_execute_dft on an existing plan is safe from any thread.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch.data(), scratch.data(), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

// Batched plans over a row-major rows x cols array, keyed by shape and axis.
class ManyPlanCache {
 public:
  static ManyPlanCache& instance() {
    static ManyPlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int axis, int sign) {
    std::lock_guard lock(mutex_);
    const Key key{rows, cols, axis, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(rows * cols);
    // axis 1: each row is a contiguous line; axis 0: each column, stride cols
    const int n = static_cast<int>(axis == 1 ? cols : rows);
    const int howmany = static_cast<int>(axis == 1 ? rows : cols);
    const int stride = axis == 1 ? 1 : static_cast<int>(cols);
    const int dist = axis == 1 ? static_cast<int>(cols) : 1;
    fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, scratch.data(), nullptr, stride, dist, scratch.data(), nullptr,
                                        stride, dist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ManyPlanCache(const ManyPlanCache&) = delete;
  ManyPlanCache& operator=(const ManyPlanCache&) = delete;

 private:
  using Key = std::tuple<std::size_t, std::size_t, int, int>;
  ManyPlanCache() = default;
  ~ManyPlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

void execute(std::span<cplx> data, int sign) {
  if (data.size() < 2) return;
  fftw_plan plan = PlanCache::instance().get(data.size(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

// Long-double plans for the few places where cancellation in a global
// transform would swamp exponentially small tail values.
class LongPlanCache {
 public:
  static LongPlanCache& instance() {
    static LongPlanCache cache;
    return cache;
  }

  fftwl_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftwl_complex> scratch(n);
    fftwl_plan plan = fftwl_plan_dft_1d(static_cast<int>(n), scratch.data(), scratch.data(), sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  LongPlanCache(const LongPlanCache&) = delete;
  LongPlanCache& operator=(const LongPlanCache&) = delete;

 private:
  LongPlanCache() = default;
  ~LongPlanCache() {
    for (auto& [key, plan] : plans_) fftwl_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftwl_plan> plans_;
};

void execute_long(std::span<std::complex<long double>> data, int sign) {
  if (data.size() < 2) return;
  fftwl_plan plan = LongPlanCache::instance().get(data.size(), sign);
  auto* ptr = reinterpret_cast<fftwl_complex*>(data.data());
  fftwl_execute_dft(plan, ptr, ptr);
}

}  // namespace

void forward(std::span<cplx> data) { execute(data, FFTW_FORWARD); }
void forward(std::span<std::complex<long double>> data) { execute_long(data, FFTW_FORWARD); }
void inverse(std::span<std::complex<long double>> data) { execute_long(data, FFTW_BACKWARD); }
void inverse(std::span<cplx> data) { execute(data, FFTW_BACKWARD); }

void along_axis(std::span<cplx> data, std::size_t rows, std::size_t cols, int axis, bool inverse) {
  if (data.size() != rows * cols || (axis != 0 && axis != 1))
    throw ConfigError("fft::along_axis: shape does not match the data");
  if ((axis == 1 ? cols : rows) < 2) return;
  fftw_plan plan = ManyPlanCache::instance().get(rows, cols, axis, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

void shift(std::span<cplx> data) {
  std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(data.size() / 2), data.end());
}

void unshift(std::span<cplx> data) {
  std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>((data.size() + 1) / 2),
              data.end());
}

}  // namespace bohm::fft
