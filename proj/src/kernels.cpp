#include "trackkit/kernels.hpp"

#include <stdexcept>

#include "kernels_detail.hpp"

namespace trackkit::kernels {
namespace {

struct Dispatch {
  Backend backend;
  detail::KernelTable table;

  Dispatch() : backend(Backend::scalar), table(detail::scalar_table()) {
#if defined(TRACKKIT_HAVE_AVX2)
    if (detail::avx2_supported()) {
      backend = Backend::avx2;
      table = detail::avx2_table();
    }
#elif defined(TRACKKIT_HAVE_NEON)
    backend = Backend::neon;
    table = detail::neon_table();
#endif
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::scalar};
#if defined(TRACKKIT_HAVE_AVX2)
  if (detail::avx2_supported()) out.push_back(Backend::avx2);
#endif
#if defined(TRACKKIT_HAVE_NEON)
  out.push_back(Backend::neon);
#endif
  return out;
}

Backend active_backend() { return dispatch().backend; }

bool set_backend(Backend b) {
  switch (b) {
    case Backend::scalar:
      dispatch().table = detail::scalar_table();
      dispatch().backend = b;
      return true;
    case Backend::avx2:
#if defined(TRACKKIT_HAVE_AVX2)
      if (detail::avx2_supported()) {
        dispatch().table = detail::avx2_table();
        dispatch().backend = b;
        return true;
      }
#endif
      return false;
    case Backend::neon:
#if defined(TRACKKIT_HAVE_NEON)
      dispatch().table = detail::neon_table();
      dispatch().backend = b;
      return true;
#else
      return false;
#endif
  }
  return false;
}

double dot(const double* a, const double* b, std::size_t n) {
  return dispatch().table.dot(a, b, n);
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  return dispatch().table.squared_l2(a, b, n);
}

void iou_row(double qxmin, double qymin, double qxmax, double qymax,
             const double* xmin, const double* ymin,
             const double* xmax, const double* ymax,
             std::size_t n, double* out) {
  dispatch().table.iou_row(qxmin, qymin, qxmax, qymax, xmin, ymin, xmax, ymax, n, out);
}

}  // namespace trackkit::kernels
