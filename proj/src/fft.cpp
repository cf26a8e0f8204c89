#include "gph/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace gph {
namespace {

// FFTW plan creation is not thread-safe; executions on distinct buffers are.
// Each thread keeps its own (length, direction) -> plan cache, with the plan
// bound to a thread-local line buffer.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct LinePlan {
  fftw_plan plan = nullptr;
  std::vector<cplx> buf;
};

LinePlan& line_plan(std::size_t n, bool forward) {
  thread_local std::map<std::pair<std::size_t, bool>, LinePlan> cache;
  auto& entry = cache[{n, forward}];
  if (!entry.plan) {
    entry.buf.resize(n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    entry.plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(entry.buf.data()),
        reinterpret_cast<fftw_complex*>(entry.buf.data()),
        forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!entry.plan) throw std::runtime_error("fftw: plan creation failed");
  }
  return entry;
}

}  // namespace

void fft_axis(Tensor& t, std::size_t axis, bool forward) {
  if (axis >= t.rank()) throw std::invalid_argument("fft_axis: axis out of range");
  const std::size_t n = t.shape()[axis];
  const std::size_t stride = t.strides()[axis];
  const std::size_t block = n * stride;
  const std::size_t total = t.size();
  auto& lp = line_plan(n, forward);
  const double scale = forward ? 1.0 : 1.0 / static_cast<double>(n);
  cplx* data = t.data();
  // Lines along `axis` start at every index whose axis-component is zero:
  // iterate over blocks of n*stride and the stride offsets inside each.
  for (std::size_t base = 0; base < total; base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      cplx* line = data + base + off;
      for (std::size_t i = 0; i < n; ++i) lp.buf[i] = line[i * stride];
      fftw_execute(lp.plan);
      for (std::size_t i = 0; i < n; ++i) line[i * stride] = lp.buf[i] * scale;
    }
  }
}

void fft_all_axes(Tensor& t, bool forward) {
  for (std::size_t a = 0; a < t.rank(); ++a) fft_axis(t, a, forward);
}

}  // namespace gph
