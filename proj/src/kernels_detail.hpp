#pragma once

#include <cstddef>

namespace trackkit::kernels::detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_l2)(const double*, const double*, std::size_t);
  void (*iou_row)(double, double, double, double,
                  const double*, const double*, const double*, const double*,
                  std::size_t, double*);
};

KernelTable scalar_table();

#if defined(TRACKKIT_HAVE_AVX2)
KernelTable avx2_table();
bool avx2_supported();
#endif

#if defined(TRACKKIT_HAVE_NEON)
KernelTable neon_table();
#endif

}  // namespace trackkit::kernels::detail
