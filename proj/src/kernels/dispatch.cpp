#include <atomic>

#include "spdtraj/error.hpp"
#include "spdtraj/kernels.hpp"

namespace spdtraj::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SPDTRAJ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend widest() { return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar; }

const Table& table_for(Backend b) {
#if defined(SPDTRAJ_HAVE_AVX2)
  if (b == Backend::kAvx2) return avx2_table();
#endif
  (void)b;
  return scalar_table();
}

struct State {
  std::atomic<Backend> backend{widest()};
  std::atomic<const Table*> table{&table_for(backend.load())};
};

State& state() {
  static State s;
  return s;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

void select(Backend b) {
  if (!backend_available(b))
    throw ValidationError("kernel backend '" + std::string(backend_name(b)) +
                          "' is not supported on this CPU");
  state().backend.store(b);
  state().table.store(&table_for(b));
}

Backend active_backend() { return state().backend.load(); }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const Table& active() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace spdtraj::kernels
