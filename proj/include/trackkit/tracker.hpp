#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "trackkit/box.hpp"
#include "trackkit/metric_learning.hpp"

namespace trackkit {

/// One detector output: box, class, confidence and appearance embedding.
struct Detection {
  Box box;
  int class_id = 0;
  double score = 0.0;
  Embedding embedding;
  std::int64_t frame_index = 0;
};

struct TrackerConfig {
  /// Detections below this score never match and never spawn tracks.
  double score_threshold = 0.5;
  /// Per frame, only the top_k highest-scoring detections are considered
  /// (capped before score thresholding).
  std::size_t top_k = 100;
  /// Most recent observations kept per track (H).
  std::size_t history_depth = 5;
  /// A track unseen for more than this many frames is marked dead.
  std::int64_t keep_alive_frames = 40;
  /// Cosine gate: a pair is matchable only if some stored observation has
  /// cosine distance <= 1 - epsilon. Ignored when weight_emb == 0 (the
  /// pure-IOU configuration uses no embeddings at all).
  double epsilon = 0.5;
  /// IOU below this contributes zero to the similarity.
  double iou_truncation = 0.4;
  double weight_iou = 0.5;
  double weight_emb = 0.5;
};

/// Throws std::invalid_argument when a field is out of range
/// (weight_iou + weight_emb must be positive, epsilon in (0, 1], ...).
void validate(const TrackerConfig& config);

enum class TrackState { alive, dead };

struct Observation {
  std::int64_t frame_index = 0;
  Detection detection;
};

struct Track {
  std::int64_t id = 0;
  TrackState state = TrackState::alive;
  /// Newest at the back; at most history_depth entries.
  std::deque<Observation> history;
  std::int64_t frames_since_update = 0;
  int class_id = 0;
};

struct SimilarityResult {
  double score = 0.0;
  bool gate_open = false;
};

/// Similarity of a detection against an alive track: the maximum over the
/// track's stored observations of
///   weight_iou * truncated_iou(boxes) + weight_emb * (1 - cosine_distance).
/// The gate opens when any stored observation is within cosine distance
/// 1 - epsilon (always open when weight_emb == 0).
SimilarityResult similarity(const Detection& det, const Track& track,
                            const TrackerConfig& config);

/// Greedy bipartite matching: repeatedly commits the highest-similarity
/// ungated pair whose detection and track are both free. Ties break toward
/// the lower detection index, then the lower track index.
std::vector<std::pair<std::size_t, std::size_t>> greedy_match(
    const std::vector<std::vector<double>>& similarities,
    const std::vector<std::vector<char>>& gates);

struct FrameAssignment {
  std::int64_t track_id = 0;
  Detection detection;
};

/// Online track store. Single-writer: observe_frame calls must arrive in
/// frame order; distinct stores are independent. Track ids are never
/// reused; dead tracks stay in the store but never match again.
class TrackStore {
 public:
  explicit TrackStore(TrackerConfig config = {});

  /// Ingests one frame of detections (all carrying frame_index). Returns
  /// the frame's (track id, detection) assignments, including tracks
  /// created this frame. Throws std::invalid_argument when frame_index is
  /// not strictly greater than the last observed frame.
  std::vector<FrameAssignment> observe_frame(std::int64_t frame_index,
                                             const std::vector<Detection>& detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }
  std::int64_t current_frame() const { return current_frame_; }
  std::int64_t next_track_id() const { return next_track_id_; }

 private:
  TrackerConfig config_;
  std::vector<Track> tracks_;
  std::int64_t next_track_id_ = 0;
  std::int64_t current_frame_ = -1;
};

}  // namespace trackkit
