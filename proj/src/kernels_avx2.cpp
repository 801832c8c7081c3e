#include <immintrin.h>

#include <algorithm>

#include "kernels_detail.hpp"

// 4-wide double kernels. iou_row mirrors the scalar operation order
// exactly (no FMA contraction) so scalar and AVX2 results are
// bit-identical; the reductions in dot/squared_l2 reassociate and may
// differ from scalar by rounding only.

namespace trackkit::kernels::detail {
namespace {

double reduce_add(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d sum2 = _mm_add_pd(lo, hi);
  const __m128d sum1 = _mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2));
  return _mm_cvtsd_f64(sum1);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = reduce_add(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_l2_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d, d, acc0);
  }
  double acc = reduce_add(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void iou_row_avx2(double qxmin, double qymin, double qxmax, double qymax,
                  const double* xmin, const double* ymin,
                  const double* xmax, const double* ymax,
                  std::size_t n, double* out) {
  const double qarea_s = (qxmax - qxmin) * (qymax - qymin);
  const __m256d vqxmin = _mm256_set1_pd(qxmin);
  const __m256d vqymin = _mm256_set1_pd(qymin);
  const __m256d vqxmax = _mm256_set1_pd(qxmax);
  const __m256d vqymax = _mm256_set1_pd(qymax);
  const __m256d vqarea = _mm256_set1_pd(qarea_s);
  const __m256d vzero = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d bxmin = _mm256_loadu_pd(xmin + i);
    const __m256d bymin = _mm256_loadu_pd(ymin + i);
    const __m256d bxmax = _mm256_loadu_pd(xmax + i);
    const __m256d bymax = _mm256_loadu_pd(ymax + i);

    const __m256d iw = _mm256_sub_pd(_mm256_min_pd(vqxmax, bxmax), _mm256_max_pd(vqxmin, bxmin));
    const __m256d ih = _mm256_sub_pd(_mm256_min_pd(vqymax, bymax), _mm256_max_pd(vqymin, bymin));
    const __m256d inter = _mm256_mul_pd(_mm256_max_pd(iw, vzero), _mm256_max_pd(ih, vzero));
    const __m256d barea = _mm256_mul_pd(_mm256_sub_pd(bxmax, bxmin), _mm256_sub_pd(bymax, bymin));
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(vqarea, barea), inter);

    const __m256d ratio = _mm256_div_pd(inter, uni);
    const __m256d positive = _mm256_cmp_pd(uni, vzero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(ratio, positive));
  }
  for (; i < n; ++i) {
    const double iw = std::min(qxmax, xmax[i]) - std::max(qxmin, xmin[i]);
    const double ih = std::min(qymax, ymax[i]) - std::max(qymin, ymin[i]);
    const double inter = std::max(iw, 0.0) * std::max(ih, 0.0);
    const double uni = qarea_s + (xmax[i] - xmin[i]) * (ymax[i] - ymin[i]) - inter;
    out[i] = uni > 0.0 ? inter / uni : 0.0;
  }
}

}  // namespace

KernelTable avx2_table() {
  return {dot_avx2, squared_l2_avx2, iou_row_avx2};
}

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace trackkit::kernels::detail
