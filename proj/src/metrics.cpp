#include "trackkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace trackkit {

namespace detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One Dijkstra-style augmenting path from `start_row`, after the scipy
// rectangular LSAP implementation. Returns the sink column.
int augmenting_path(int nc, const std::vector<double>& cost, int row_stride,
                    std::vector<double>& u, std::vector<double>& v,
                    std::vector<int>& path, const std::vector<int>& row4col,
                    std::vector<double>& shortest, std::vector<char>& SR,
                    std::vector<char>& SC, std::vector<int>& remaining,
                    int start_row, double& min_val_out) {
  double min_val = 0.0;
  int num_remaining = nc;
  for (int j = 0; j < nc; ++j) remaining[j] = j;
  std::fill(SR.begin(), SR.end(), 0);
  std::fill(SC.begin(), SC.end(), 0);
  std::fill(shortest.begin(), shortest.end(), kInf);

  int i = start_row;
  int sink = -1;
  while (sink == -1) {
    SR[i] = 1;
    int index = -1;
    double lowest = kInf;
    for (int it = 0; it < num_remaining; ++it) {
      const int j = remaining[it];
      const double r = min_val + cost[i * row_stride + j] - u[i] - v[j];
      if (r < shortest[j]) {
        path[j] = i;
        shortest[j] = r;
      }
      if (shortest[j] < lowest ||
          (shortest[j] == lowest && row4col[j] == -1)) {
        lowest = shortest[j];
        index = it;
      }
    }
    min_val = lowest;
    const int j = remaining[index];
    if (row4col[j] == -1)
      sink = j;
    else
      i = row4col[j];
    SC[j] = 1;
    remaining[index] = remaining[--num_remaining];
  }
  min_val_out = min_val;
  return sink;
}

std::vector<int> solve_lsap_rect(int nr, int nc, const std::vector<double>& cost) {
  std::vector<double> u(nr, 0.0), v(nc, 0.0), shortest(nc);
  std::vector<int> path(nc, -1), col4row(nr, -1), row4col(nc, -1), remaining(nc);
  std::vector<char> SR(nr), SC(nc);

  for (int cur_row = 0; cur_row < nr; ++cur_row) {
    double min_val = 0.0;
    const int sink = augmenting_path(nc, cost, nc, u, v, path, row4col,
                                     shortest, SR, SC, remaining, cur_row, min_val);
    u[cur_row] += min_val;
    for (int i = 0; i < nr; ++i) {
      if (SR[i] && i != cur_row) u[i] += min_val - shortest[col4row[i]];
    }
    for (int j = 0; j < nc; ++j) {
      if (SC[j]) v[j] -= min_val - shortest[j];
    }
    int j = sink;
    while (true) {
      const int i = path[j];
      row4col[j] = i;
      std::swap(col4row[i], j);
      if (i == cur_row) break;
    }
  }
  return col4row;
}

}  // namespace

std::vector<int> solve_lsap(const std::vector<std::vector<double>>& cost) {
  const int nr = static_cast<int>(cost.size());
  const int nc = nr ? static_cast<int>(cost[0].size()) : 0;
  if (nr == 0 || nc == 0) return std::vector<int>(nr, -1);
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != nc)
      throw std::invalid_argument("cost matrix is ragged");
    for (double c : row) {
      if (!std::isfinite(c)) throw std::invalid_argument("cost must be finite");
    }
  }

  if (nr <= nc) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(nr) * nc);
    for (const auto& row : cost) flat.insert(flat.end(), row.begin(), row.end());
    return solve_lsap_rect(nr, nc, flat);
  }

  // More rows than columns: solve the transpose and invert the mapping.
  std::vector<double> flat(static_cast<std::size_t>(nc) * nr);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) flat[j * nr + i] = cost[i][j];
  const auto row4colT = solve_lsap_rect(nc, nr, flat);
  std::vector<int> col4row(nr, -1);
  for (int j = 0; j < nc; ++j)
    if (row4colT[j] >= 0) col4row[row4colT[j]] = j;
  return col4row;
}

}  // namespace detail

MotAccumulator::MotAccumulator(double iou_gate) : gate_(iou_gate) {
  if (iou_gate < 0.0 || iou_gate > 1.0)
    throw std::invalid_argument("iou_gate must be in [0,1]");
}

void MotAccumulator::update(const std::vector<MotFrameEntry>& gt,
                            const std::vector<MotFrameEntry>& hyp) {
  {
    std::set<std::int64_t> ids;
    for (const auto& g : gt) {
      if (!ids.insert(g.id).second)
        throw std::invalid_argument("duplicate gt track id within a frame");
    }
  }

  counts_.total_gt += static_cast<std::int64_t>(gt.size());

  std::vector<char> gt_done(gt.size(), 0), hyp_done(hyp.size(), 0);

  // Keep last frame's correspondences that are still within the gate.
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto it = last_match_.find(gt[i].id);
    if (it == last_match_.end()) continue;
    for (std::size_t j = 0; j < hyp.size(); ++j) {
      if (hyp_done[j] || hyp[j].id != it->second) continue;
      if (iou(gt[i].box, hyp[j].box) >= gate_) {
        gt_done[i] = 1;
        hyp_done[j] = 1;
        ++counts_.true_positives;
      }
      break;
    }
  }

  // Optimal assignment on the remainder; gated pairs carry a sentinel cost
  // and are discarded afterwards.
  std::vector<std::size_t> gi, hj;
  for (std::size_t i = 0; i < gt.size(); ++i)
    if (!gt_done[i]) gi.push_back(i);
  for (std::size_t j = 0; j < hyp.size(); ++j)
    if (!hyp_done[j]) hj.push_back(j);

  constexpr double kForbidden = 1e9;
  if (!gi.empty() && !hj.empty()) {
    std::vector<std::vector<double>> cost(gi.size(), std::vector<double>(hj.size()));
    for (std::size_t a = 0; a < gi.size(); ++a) {
      for (std::size_t b = 0; b < hj.size(); ++b) {
        const double v = iou(gt[gi[a]].box, hyp[hj[b]].box);
        cost[a][b] = v >= gate_ ? 1.0 - v : kForbidden;
      }
    }
    const auto col4row = detail::solve_lsap(cost);
    for (std::size_t a = 0; a < gi.size(); ++a) {
      const int b = col4row[a];
      if (b < 0 || cost[a][b] >= kForbidden / 2) continue;
      const std::int64_t gt_id = gt[gi[a]].id;
      const std::int64_t hyp_id = hyp[hj[b]].id;
      ++counts_.true_positives;
      const auto it = last_match_.find(gt_id);
      if (it != last_match_.end() && it->second != hyp_id) ++counts_.id_switches;
      last_match_[gt_id] = hyp_id;
      gt_done[gi[a]] = 1;
      hyp_done[hj[b]] = 1;
    }
  }

  for (std::size_t i = 0; i < gt.size(); ++i)
    if (!gt_done[i]) ++counts_.misses;
  for (std::size_t j = 0; j < hyp.size(); ++j)
    if (!hyp_done[j]) ++counts_.false_positives;
}

MotSummary MotAccumulator::finalize() const {
  MotSummary out = counts_;
  if (out.total_gt > 0) {
    out.mota = 1.0 - static_cast<double>(out.misses + out.false_positives +
                                         out.id_switches) /
                         static_cast<double>(out.total_gt);
  } else {
    out.mota.reset();
  }
  return out;
}

void MotAccumulator::merge(const MotAccumulator& other) {
  counts_.true_positives += other.counts_.true_positives;
  counts_.false_positives += other.counts_.false_positives;
  counts_.misses += other.counts_.misses;
  counts_.id_switches += other.counts_.id_switches;
  counts_.total_gt += other.counts_.total_gt;
}

PrCurve pr_curve(const std::vector<Detection>& detections,
                 const std::vector<GtBox>& gt,
                 int class_id, double iou_threshold) {
  std::vector<std::size_t> det_order;
  for (std::size_t i = 0; i < detections.size(); ++i)
    if (detections[i].class_id == class_id) det_order.push_back(i);
  std::stable_sort(det_order.begin(), det_order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  std::vector<std::size_t> gt_indices;
  for (std::size_t g = 0; g < gt.size(); ++g)
    if (gt[g].class_id == class_id) gt_indices.push_back(g);

  PrCurve curve;
  curve.gt_count = static_cast<std::int64_t>(gt_indices.size());
  std::vector<char> taken(gt_indices.size(), 0);
  for (std::size_t idx : det_order) {
    const Detection& det = detections[idx];
    double best = -1.0;
    std::size_t best_g = 0;
    for (std::size_t g = 0; g < gt_indices.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(det.box, gt[gt_indices[g]].box);
      if (v > best) {
        best = v;
        best_g = g;
      }
    }
    const bool tp = best >= iou_threshold;
    if (tp) taken[best_g] = 1;
    curve.ranked.emplace_back(det.score, tp);
  }
  return curve;
}

double average_precision(const PrCurve& curve) {
  if (curve.gt_count <= 0)
    throw std::invalid_argument("average precision undefined without groundtruth");

  const std::size_t n = curve.ranked.size();
  std::vector<double> precision(n), recall(n);
  std::int64_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (curve.ranked[k].second) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(tp) / static_cast<double>(curve.gt_count);
  }
  // Monotone precision envelope from the right.
  for (std::size_t k = n; k-- > 1;)
    precision[k - 1] = std::max(precision[k - 1], precision[k]);

  double total = 0.0;
  std::size_t k = 0;
  for (int r = 0; r <= 100; ++r) {
    const double target = static_cast<double>(r) / 100.0;
    while (k < n && recall[k] < target) ++k;
    if (k < n) total += precision[k];
  }
  return total / 101.0;
}

const std::vector<double>& coco_iou_thresholds() {
  static const std::vector<double> t = {0.50, 0.55, 0.60, 0.65, 0.70,
                                        0.75, 0.80, 0.85, 0.90, 0.95};
  return t;
}

std::vector<std::optional<double>> detection_ap_per_threshold(
    const std::vector<Detection>& detections,
    const std::vector<GtBox>& gt,
    const std::vector<double>& thresholds) {
  if (thresholds.empty())
    throw std::invalid_argument("threshold list must be non-empty");

  std::set<int> classes;
  for (const auto& g : gt) classes.insert(g.class_id);

  std::vector<std::optional<double>> out;
  out.reserve(thresholds.size());
  for (double thr : thresholds) {
    double sum = 0.0;
    int counted = 0;
    for (int cls : classes) {
      const PrCurve curve = pr_curve(detections, gt, cls, thr);
      if (curve.gt_count == 0) continue;
      sum += average_precision(curve);
      ++counted;
    }
    if (counted > 0)
      out.emplace_back(sum / counted);
    else
      out.emplace_back(std::nullopt);
  }
  return out;
}

std::optional<double> detection_map(const std::vector<Detection>& detections,
                                    const std::vector<GtBox>& gt,
                                    const std::vector<double>& thresholds) {
  const auto per_threshold = detection_ap_per_threshold(detections, gt, thresholds);
  double sum = 0.0;
  int counted = 0;
  for (const auto& ap : per_threshold) {
    if (!ap) continue;
    sum += *ap;
    ++counted;
  }
  if (counted == 0) return std::nullopt;
  return sum / static_cast<double>(per_threshold.size());
}

}  // namespace trackkit
