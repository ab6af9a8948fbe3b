#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ktcy/kernels.hpp"

namespace ktcy::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& choose() {
  const auto tables = available();
  const char* forced = std::getenv("KTCY_SIMD");
  if (forced != nullptr && std::string(forced) != "auto") {
    for (const KernelTable* t : tables)
      if (t->name == forced) return *t;
    throw std::runtime_error(std::string("KTCY_SIMD=") + forced + " is not available on this CPU");
  }
  return *tables.back();
}

}  // namespace

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> tables{&scalar_table()};
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) tables.push_back(&avx2_table());
#endif
#if defined(__aarch64__)
  tables.push_back(&neon_table());
#endif
  return tables;
}

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace ktcy::kernels
