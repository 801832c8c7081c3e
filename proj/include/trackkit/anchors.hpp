#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trackkit/box.hpp"

namespace trackkit {

/// Anchor grid parameters. One grid per stride; at every grid point,
/// K = |scales| * |aspect_ratios| anchor shapes. The shape with scale s
/// and aspect ratio a is base_size*s*sqrt(a) wide and base_size*s/sqrt(a)
/// tall, centered on the grid point.
struct AnchorConfig {
  std::vector<int> strides = {8, 16, 32, 64, 128};
  std::vector<double> scales = {1.0, 1.4142135623730951};
  std::vector<double> aspect_ratios = {0.5, 1.0, 2.0};
  double base_size = 32.0;

  std::size_t shapes_per_location() const {
    return scales.size() * aspect_ratios.size();
  }
};

/// Flat anchor list plus the (level, shape) identity of each anchor.
/// Anchors partially outside the image are kept unclipped.
struct AnchorSet {
  std::vector<Box> anchors;
  std::vector<int> level_of;
  std::vector<int> shape_of;

  std::size_t size() const { return anchors.size(); }
};

inline constexpr double kDetectionMatchIou = 0.5;
inline constexpr double kTrackIdentityIou = 0.7;

/// Per-anchor assignment output. matched_gt holds the groundtruth index
/// or kBackground; track_identity holds the assigned track id or kNoIdentity
/// (only assign_track_identities fills it).
struct AssignmentResult {
  static constexpr std::int64_t kBackground = -1;
  static constexpr std::int64_t kNoIdentity = -1;

  std::vector<std::int64_t> matched_gt;
  std::vector<std::int64_t> track_identity;

  bool is_matched(std::size_t anchor) const {
    return matched_gt[anchor] != kBackground;
  }
  bool has_identity(std::size_t anchor) const {
    return track_identity[anchor] != kNoIdentity;
  }
};

/// Lays out every anchor for the given image size. Grid at stride s has
/// ceil(W/s) x ceil(H/s) centers at ((i+0.5)s, (j+0.5)s). Throws
/// std::invalid_argument on empty scales/aspect_ratios, non-increasing
/// strides, or non-positive image dimensions.
AnchorSet generate_anchors(const AnchorConfig& config,
                           double image_width, double image_height);

/// Detection target assignment: an anchor matches its argmax-IOU
/// groundtruth when that IOU >= 0.5, otherwise background; afterwards each
/// groundtruth forces its single highest-IOU anchor to match it regardless
/// of the threshold. The forced pass may overwrite a threshold match; when
/// two groundtruths force the same anchor, the lower groundtruth index
/// keeps it. Ties in IOU break toward the lower gt index (per anchor) and
/// the lower anchor index (per gt). Empty gt yields all-background.
AssignmentResult assign_detection_targets(const AnchorSet& anchors,
                                          const std::vector<Box>& gt);

/// Track identity assignment: an anchor receives the track id of its
/// argmax-IOU groundtruth iff that IOU >= 0.7. No forced-nearest pass.
AssignmentResult assign_track_identities(const AnchorSet& anchors,
                                         const std::vector<Box>& gt,
                                         const std::vector<std::int64_t>& gt_track_ids);

/// IOU of every gt box (rows) against every anchor (columns).
std::vector<std::vector<double>> anchor_gt_iou(const AnchorSet& anchors,
                                               const std::vector<Box>& gt);

}  // namespace trackkit
