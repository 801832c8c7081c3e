#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "trackkit/box.hpp"
#include "trackkit/tracker.hpp"

namespace trackkit {

struct MotFrameEntry {
  std::int64_t id = 0;
  Box box;
};

struct MotSummary {
  /// 1 - (misses + false_positives + id_switches) / total_gt; absent when
  /// total_gt == 0.
  std::optional<double> mota;
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t misses = 0;
  std::int64_t id_switches = 0;
  std::int64_t total_gt = 0;
};

/// CLEAR MOT accumulator. Feed one frame at a time, in order. Previous
/// frame correspondences persist while they stay within the IOU gate;
/// leftover objects and hypotheses are then matched by maximal total IOU
/// above the gate. A groundtruth matched to a different hypothesis id than
/// its last known correspondence counts one id switch.
class MotAccumulator {
 public:
  explicit MotAccumulator(double iou_gate = 0.5);

  /// Throws std::invalid_argument on duplicate gt ids within the frame.
  void update(const std::vector<MotFrameEntry>& gt,
              const std::vector<MotFrameEntry>& hyp);

  MotSummary finalize() const;

  /// Folds another clip's counts into this one. Correspondence state is
  /// per-clip and is not merged.
  void merge(const MotAccumulator& other);

  double iou_gate() const { return gate_; }

 private:
  double gate_;
  std::unordered_map<std::int64_t, std::int64_t> last_match_;
  MotSummary counts_;
};

/// Ranked detection outcomes at one IOU threshold for one class.
struct PrCurve {
  /// (score, matched-a-gt) in descending score order.
  std::vector<std::pair<double, bool>> ranked;
  std::int64_t gt_count = 0;
};

struct GtBox {
  int class_id = 0;
  Box box;
};

/// Greedy score-descending matching of detections to unmatched same-class
/// gt with IOU >= threshold. Score ties keep input order.
PrCurve pr_curve(const std::vector<Detection>& detections,
                 const std::vector<GtBox>& gt,
                 int class_id, double iou_threshold);

/// 101-point interpolated average precision. Requires gt_count > 0.
double average_precision(const PrCurve& curve);

/// {0.50, 0.55, ..., 0.95}
const std::vector<double>& coco_iou_thresholds();

/// Mean AP per threshold, averaged over every class that has groundtruth.
/// Entries are absent only when no class has groundtruth.
std::vector<std::optional<double>> detection_ap_per_threshold(
    const std::vector<Detection>& detections,
    const std::vector<GtBox>& gt,
    const std::vector<double>& thresholds);

/// Mean over thresholds of the per-threshold class-averaged AP. Absent when
/// there is no groundtruth at all. Throws std::invalid_argument on an empty
/// threshold list.
std::optional<double> detection_map(
    const std::vector<Detection>& detections,
    const std::vector<GtBox>& gt,
    const std::vector<double>& thresholds = coco_iou_thresholds());

namespace detail {

/// Minimum-cost rectangular assignment (Jonker-Volgenant shortest
/// augmenting path). Returns, for each row, the assigned column or -1.
/// Requires finite costs.
std::vector<int> solve_lsap(const std::vector<std::vector<double>>& cost);

}  // namespace detail

}  // namespace trackkit
