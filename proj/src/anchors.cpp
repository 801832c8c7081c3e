#include "trackkit/anchors.hpp"

#include <cmath>
#include <stdexcept>

#include "trackkit/kernels.hpp"

namespace trackkit {

AnchorSet generate_anchors(const AnchorConfig& config,
                           double image_width, double image_height) {
  if (config.scales.empty()) throw std::invalid_argument("anchor scales must be non-empty");
  if (config.aspect_ratios.empty()) throw std::invalid_argument("anchor aspect_ratios must be non-empty");
  if (config.strides.empty()) throw std::invalid_argument("anchor strides must be non-empty");
  if (config.base_size <= 0.0) throw std::invalid_argument("anchor base_size must be positive");
  if (image_width <= 0.0 || image_height <= 0.0)
    throw std::invalid_argument("image dimensions must be positive");
  for (std::size_t l = 0; l < config.strides.size(); ++l) {
    if (config.strides[l] <= 0) throw std::invalid_argument("anchor strides must be positive");
    if (l > 0 && config.strides[l] <= config.strides[l - 1])
      throw std::invalid_argument("anchor strides must be strictly increasing");
  }

  // Precompute the K shape extents (half-width, half-height), scale-major.
  std::vector<std::pair<double, double>> half_extents;
  half_extents.reserve(config.shapes_per_location());
  for (double s : config.scales) {
    for (double a : config.aspect_ratios) {
      const double w = config.base_size * s * std::sqrt(a);
      const double h = config.base_size * s / std::sqrt(a);
      half_extents.emplace_back(w / 2.0, h / 2.0);
    }
  }

  AnchorSet set;
  for (std::size_t level = 0; level < config.strides.size(); ++level) {
    const double stride = config.strides[level];
    const auto nx = static_cast<std::size_t>(std::ceil(image_width / stride));
    const auto ny = static_cast<std::size_t>(std::ceil(image_height / stride));
    for (std::size_t gy = 0; gy < ny; ++gy) {
      const double cy = (static_cast<double>(gy) + 0.5) * stride;
      for (std::size_t gx = 0; gx < nx; ++gx) {
        const double cx = (static_cast<double>(gx) + 0.5) * stride;
        for (std::size_t k = 0; k < half_extents.size(); ++k) {
          const auto [hw, hh] = half_extents[k];
          set.anchors.push_back({cx - hw, cy - hh, cx + hw, cy + hh});
          set.level_of.push_back(static_cast<int>(level));
          set.shape_of.push_back(static_cast<int>(k));
        }
      }
    }
  }
  return set;
}

std::vector<std::vector<double>> anchor_gt_iou(const AnchorSet& anchors,
                                               const std::vector<Box>& gt) {
  const std::size_t n = anchors.size();
  std::vector<double> xmin(n), ymin(n), xmax(n), ymax(n);
  for (std::size_t i = 0; i < n; ++i) {
    xmin[i] = anchors.anchors[i].xmin;
    ymin[i] = anchors.anchors[i].ymin;
    xmax[i] = anchors.anchors[i].xmax;
    ymax[i] = anchors.anchors[i].ymax;
  }
  std::vector<std::vector<double>> out(gt.size(), std::vector<double>(n));
  for (std::size_t g = 0; g < gt.size(); ++g) {
    kernels::iou_row(gt[g].xmin, gt[g].ymin, gt[g].xmax, gt[g].ymax,
                     xmin.data(), ymin.data(), xmax.data(), ymax.data(),
                     n, out[g].data());
  }
  return out;
}

namespace {

// Per-anchor argmax gt. Ties break toward the lower gt index.
void best_gt_per_anchor(const std::vector<std::vector<double>>& iou_matrix,
                        std::size_t num_anchors,
                        std::vector<std::int64_t>& best_gt,
                        std::vector<double>& best_iou) {
  best_gt.assign(num_anchors, -1);
  best_iou.assign(num_anchors, -1.0);
  for (std::size_t g = 0; g < iou_matrix.size(); ++g) {
    const auto& row = iou_matrix[g];
    for (std::size_t a = 0; a < num_anchors; ++a) {
      if (row[a] > best_iou[a]) {
        best_iou[a] = row[a];
        best_gt[a] = static_cast<std::int64_t>(g);
      }
    }
  }
}

}  // namespace

AssignmentResult assign_detection_targets(const AnchorSet& anchors,
                                          const std::vector<Box>& gt) {
  const std::size_t n = anchors.size();
  AssignmentResult result;
  result.matched_gt.assign(n, AssignmentResult::kBackground);
  result.track_identity.assign(n, AssignmentResult::kNoIdentity);
  if (gt.empty() || n == 0) return result;

  const auto iou_matrix = anchor_gt_iou(anchors, gt);

  std::vector<std::int64_t> best_gt;
  std::vector<double> best_iou;
  best_gt_per_anchor(iou_matrix, n, best_gt, best_iou);
  for (std::size_t a = 0; a < n; ++a) {
    if (best_iou[a] >= kDetectionMatchIou) result.matched_gt[a] = best_gt[a];
  }

  // Forced-nearest pass: each gt claims its single best anchor even below
  // the threshold. Lower gt index keeps an anchor claimed twice; a claim
  // overwrites a threshold match.
  std::vector<char> force_claimed(n, 0);
  for (std::size_t g = 0; g < gt.size(); ++g) {
    std::size_t best_anchor = 0;
    double best = -1.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (iou_matrix[g][a] > best) {
        best = iou_matrix[g][a];
        best_anchor = a;
      }
    }
    if (!force_claimed[best_anchor]) {
      force_claimed[best_anchor] = 1;
      result.matched_gt[best_anchor] = static_cast<std::int64_t>(g);
    }
  }
  return result;
}

AssignmentResult assign_track_identities(const AnchorSet& anchors,
                                         const std::vector<Box>& gt,
                                         const std::vector<std::int64_t>& gt_track_ids) {
  if (gt.size() != gt_track_ids.size())
    throw std::invalid_argument("gt and gt_track_ids must have equal length");

  const std::size_t n = anchors.size();
  AssignmentResult result;
  result.matched_gt.assign(n, AssignmentResult::kBackground);
  result.track_identity.assign(n, AssignmentResult::kNoIdentity);
  if (gt.empty() || n == 0) return result;

  const auto iou_matrix = anchor_gt_iou(anchors, gt);

  std::vector<std::int64_t> best_gt;
  std::vector<double> best_iou;
  best_gt_per_anchor(iou_matrix, n, best_gt, best_iou);
  for (std::size_t a = 0; a < n; ++a) {
    if (best_iou[a] >= kTrackIdentityIou) {
      result.matched_gt[a] = best_gt[a];
      result.track_identity[a] = gt_track_ids[static_cast<std::size_t>(best_gt[a])];
    }
  }
  return result;
}

}  // namespace trackkit
