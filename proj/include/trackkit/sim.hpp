#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trackkit/metrics.hpp"
#include "trackkit/tracker.hpp"

namespace trackkit {

/// Object `object_index` is hidden on frames [start_frame, end_frame):
/// absent from both groundtruth and detections.
struct OcclusionWindow {
  int object_index = 0;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;
};

struct SimulationConfig {
  int num_objects = 5;
  std::int64_t num_frames = 100;
  /// Square image, W = H = image_size.
  double image_size = 512.0;
  /// Per-object speed drawn uniformly from [speed_min, speed_max],
  /// direction uniform; constant velocity throughout the clip.
  double speed_min = 1.0;
  double speed_max = 4.0;
  double object_size_min = 40.0;
  double object_size_max = 80.0;
  std::vector<OcclusionWindow> occlusion_windows;
  /// Each pair (a, b) forces object b onto a path that meets object a's
  /// path at the clip midpoint.
  std::vector<std::pair<int, int>> crossing_pairs;
  int embedding_dim = 16;
  double embedding_noise_sigma = 0.0;
  double box_jitter_sigma = 0.0;
  double detection_dropout = 0.0;
  /// Expected uniform-random false detections per frame (Poisson).
  double false_positive_rate = 0.0;
  std::uint64_t rng_seed = 0;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const SimulationConfig& config);

/// Identity-labelled trajectories plus the noisy detections derived from
/// them. Track ids equal object indices; every non-dropout detection's
/// embedding is normalize(prototype + noise).
struct GroundTruthClip {
  std::vector<std::vector<MotFrameEntry>> gt_frames;
  std::vector<std::vector<Detection>> detection_frames;
  std::vector<Embedding> identity_prototypes;

  std::int64_t num_frames() const {
    return static_cast<std::int64_t>(gt_frames.size());
  }
};

/// Pure function of the config (rng_seed included). Identity prototypes
/// are unit vectors kept at pairwise cosine distance >= 1 by rejection
/// sampling; infeasible configurations are rejected.
GroundTruthClip generate_clip(const SimulationConfig& config);

/// Canned two-object overtaking clip: the ground-truth boxes reach
/// pairwise IOU >= 0.8 at the crossing frame while the fast object lands
/// exactly on the slow object's previous position, so box overlap alone
/// misassociates there. Prototypes are antipodal (cosine distance 2).
/// Moderate box jitter and embedding noise, driven by `seed`.
GroundTruthClip crossing_scenario(std::uint64_t seed);

/// Frame index at which the crossing_scenario boxes maximally overlap.
std::int64_t crossing_frame();

}  // namespace trackkit
