#include <algorithm>

#include "kernels_detail.hpp"

namespace trackkit::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_l2_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void iou_row_scalar(double qxmin, double qymin, double qxmax, double qymax,
                    const double* xmin, const double* ymin,
                    const double* xmax, const double* ymax,
                    std::size_t n, double* out) {
  const double qarea = (qxmax - qxmin) * (qymax - qymin);
  for (std::size_t i = 0; i < n; ++i) {
    const double iw = std::min(qxmax, xmax[i]) - std::max(qxmin, xmin[i]);
    const double ih = std::min(qymax, ymax[i]) - std::max(qymin, ymin[i]);
    const double inter = std::max(iw, 0.0) * std::max(ih, 0.0);
    const double uni = qarea + (xmax[i] - xmin[i]) * (ymax[i] - ymin[i]) - inter;
    out[i] = uni > 0.0 ? inter / uni : 0.0;
  }
}

}  // namespace

KernelTable scalar_table() {
  return {dot_scalar, squared_l2_scalar, iou_row_scalar};
}

}  // namespace trackkit::kernels::detail
