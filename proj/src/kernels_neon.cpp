#include <arm_neon.h>

#include <algorithm>

#include "kernels_detail.hpp"

// 2-wide float64 kernels for aarch64. iou_row mirrors the scalar
// operation order so results are bit-identical with the reference.

namespace trackkit::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_l2_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc0 = vfmaq_f64(acc0, d, d);
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void iou_row_neon(double qxmin, double qymin, double qxmax, double qymax,
                  const double* xmin, const double* ymin,
                  const double* xmax, const double* ymax,
                  std::size_t n, double* out) {
  const double qarea_s = (qxmax - qxmin) * (qymax - qymin);
  const float64x2_t vqxmin = vdupq_n_f64(qxmin);
  const float64x2_t vqymin = vdupq_n_f64(qymin);
  const float64x2_t vqxmax = vdupq_n_f64(qxmax);
  const float64x2_t vqymax = vdupq_n_f64(qymax);
  const float64x2_t vqarea = vdupq_n_f64(qarea_s);
  const float64x2_t vzero = vdupq_n_f64(0.0);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t bxmin = vld1q_f64(xmin + i);
    const float64x2_t bymin = vld1q_f64(ymin + i);
    const float64x2_t bxmax = vld1q_f64(xmax + i);
    const float64x2_t bymax = vld1q_f64(ymax + i);

    const float64x2_t iw = vsubq_f64(vminq_f64(vqxmax, bxmax), vmaxq_f64(vqxmin, bxmin));
    const float64x2_t ih = vsubq_f64(vminq_f64(vqymax, bymax), vmaxq_f64(vqymin, bymin));
    const float64x2_t inter = vmulq_f64(vmaxq_f64(iw, vzero), vmaxq_f64(ih, vzero));
    const float64x2_t barea = vmulq_f64(vsubq_f64(bxmax, bxmin), vsubq_f64(bymax, bymin));
    const float64x2_t uni = vsubq_f64(vaddq_f64(vqarea, barea), inter);

    const float64x2_t ratio = vdivq_f64(inter, uni);
    const uint64x2_t positive = vcgtq_f64(uni, vzero);
    vst1q_f64(out + i, vreinterpretq_f64_u64(
        vandq_u64(vreinterpretq_u64_f64(ratio), positive)));
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

KernelTable neon_table() {
  return {dot_neon, squared_l2_neon, iou_row_neon};
}

}  // namespace trackkit::kernels::detail
