#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace trackkit::kernels {

// Arithmetic inner loops used by the embedding-distance and anchor-overlap
// paths. Every kernel has a scalar reference implementation plus SIMD
// variants; the fastest variant supported by the running CPU is selected
// once at startup. `set_backend` exists so tests can pin a variant and
// compare it against the scalar reference.

enum class Backend {
  scalar,
  avx2,
  neon,
};

std::string_view backend_name(Backend b);

/// Backends compiled into this binary and usable on the running CPU.
std::vector<Backend> available_backends();

Backend active_backend();

/// Pins the active backend. Returns false (and leaves the selection
/// unchanged) when the requested backend is unavailable. Not safe to
/// call concurrently with kernel invocations.
bool set_backend(Backend b);

double dot(const double* a, const double* b, std::size_t n);

double squared_l2(const double* a, const double* b, std::size_t n);

/// IOU of one query box against n boxes stored as column arrays
/// (structure-of-arrays). Degenerate pairs with zero union yield 0.
void iou_row(double qxmin, double qymin, double qxmax, double qymax,
             const double* xmin, const double* ymin,
             const double* xmax, const double* ymax,
             std::size_t n, double* out);

}  // namespace trackkit::kernels
