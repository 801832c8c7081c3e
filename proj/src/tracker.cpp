#include "trackkit/tracker.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace trackkit {

void validate(const TrackerConfig& config) {
  if (config.score_threshold < 0.0 || config.score_threshold > 1.0)
    throw std::invalid_argument("score_threshold must be in [0,1]");
  if (config.history_depth < 1)
    throw std::invalid_argument("history_depth must be >= 1");
  if (config.keep_alive_frames < 0)
    throw std::invalid_argument("keep_alive_frames must be >= 0");
  if (config.epsilon <= 0.0 || config.epsilon > 1.0)
    throw std::invalid_argument("epsilon must be in (0,1]");
  if (config.iou_truncation < 0.0 || config.iou_truncation > 1.0)
    throw std::invalid_argument("iou_truncation must be in [0,1]");
  if (config.weight_iou < 0.0 || config.weight_emb < 0.0)
    throw std::invalid_argument("weights must be non-negative");
  if (config.weight_iou + config.weight_emb <= 0.0)
    throw std::invalid_argument("weight_iou + weight_emb must be positive");
}

SimilarityResult similarity(const Detection& det, const Track& track,
                            const TrackerConfig& config) {
  if (track.state != TrackState::alive)
    throw std::invalid_argument("similarity against a dead track");
  if (track.history.empty())
    throw std::invalid_argument("alive track with empty history");

  const bool use_embeddings = config.weight_emb > 0.0;
  SimilarityResult result;
  result.score = -1.0;
  double min_cos = 2.0;
  for (const auto& obs : track.history) {
    const double overlap =
        truncated_iou(det.box, obs.detection.box, config.iou_truncation);
    double emb_term = 0.0;
    if (use_embeddings) {
      const double cd = cosine_distance(det.embedding, obs.detection.embedding);
      min_cos = std::min(min_cos, cd);
      emb_term = 1.0 - cd;
    }
    result.score = std::max(result.score,
                            config.weight_iou * overlap + config.weight_emb * emb_term);
  }
  result.gate_open = !use_embeddings || min_cos <= 1.0 - config.epsilon;
  return result;
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_match(
    const std::vector<std::vector<double>>& similarities,
    const std::vector<std::vector<char>>& gates) {
  const std::size_t rows = similarities.size();
  if (gates.size() != rows)
    throw std::invalid_argument("similarity and gate shapes differ");
  const std::size_t cols = rows ? similarities[0].size() : 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (similarities[i].size() != cols || gates[i].size() != cols)
      throw std::invalid_argument("similarity and gate shapes differ");
  }

  struct Pair {
    double sim;
    std::size_t det, track;
  };
  std::vector<Pair> eligible;
  for (std::size_t d = 0; d < rows; ++d)
    for (std::size_t t = 0; t < cols; ++t)
      if (gates[d][t]) eligible.push_back({similarities[d][t], d, t});

  // Descending similarity with (det, track) index tie-breaks; a single
  // sorted sweep is equivalent to select-max-then-remove.
  std::sort(eligible.begin(), eligible.end(), [](const Pair& a, const Pair& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (a.det != b.det) return a.det < b.det;
    return a.track < b.track;
  });

  std::vector<char> det_used(rows, 0), track_used(cols, 0);
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  for (const auto& p : eligible) {
    if (det_used[p.det] || track_used[p.track]) continue;
    det_used[p.det] = 1;
    track_used[p.track] = 1;
    matches.emplace_back(p.det, p.track);
  }
  return matches;
}

TrackStore::TrackStore(TrackerConfig config) : config_(config) {
  validate(config_);
}

std::vector<FrameAssignment> TrackStore::observe_frame(
    std::int64_t frame_index, const std::vector<Detection>& detections) {
  if (frame_index <= current_frame_)
    throw std::invalid_argument("frame_index must be strictly increasing");
  for (const auto& det : detections) {
    if (det.frame_index != frame_index)
      throw std::invalid_argument("detection frame_index mismatch");
    if (det.score < 0.0 || det.score > 1.0)
      throw std::invalid_argument("detection score outside [0,1]");
  }

  // Top-k cap by score first, then the score threshold; both stable on
  // input order.
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });
  if (order.size() > config_.top_k) order.resize(config_.top_k);
  std::vector<std::size_t> selected;
  for (std::size_t idx : order)
    if (detections[idx].score >= config_.score_threshold) selected.push_back(idx);

  std::vector<std::size_t> alive;
  for (std::size_t t = 0; t < tracks_.size(); ++t)
    if (tracks_[t].state == TrackState::alive) alive.push_back(t);

  // Similarity and gate matrices over (selected detection, alive track);
  // cross-class pairs are gated out.
  std::vector<std::vector<double>> sims(selected.size(), std::vector<double>(alive.size(), 0.0));
  std::vector<std::vector<char>> gates(selected.size(), std::vector<char>(alive.size(), 0));
  for (std::size_t d = 0; d < selected.size(); ++d) {
    const Detection& det = detections[selected[d]];
    for (std::size_t t = 0; t < alive.size(); ++t) {
      const Track& track = tracks_[alive[t]];
      if (det.class_id != track.class_id) continue;
      const SimilarityResult s = similarity(det, track, config_);
      sims[d][t] = s.score;
      gates[d][t] = s.gate_open ? 1 : 0;
    }
  }

  const auto matches = greedy_match(sims, gates);

  std::vector<char> det_matched(selected.size(), 0);
  std::vector<char> track_matched(tracks_.size(), 0);
  std::vector<FrameAssignment> assignments;
  assignments.reserve(selected.size());

  for (const auto& [d, t] : matches) {
    Track& track = tracks_[alive[t]];
    const Detection& det = detections[selected[d]];
    track.history.push_back({frame_index, det});
    while (track.history.size() > config_.history_depth) track.history.pop_front();
    track.frames_since_update = 0;
    det_matched[d] = 1;
    track_matched[alive[t]] = 1;
    assignments.push_back({track.id, det});
  }

  // Unmatched alive tracks age by the frame gap; past keep_alive they die.
  const std::int64_t gap = current_frame_ >= 0 ? frame_index - current_frame_ : 0;
  for (std::size_t t = 0; t < tracks_.size(); ++t) {
    Track& track = tracks_[t];
    if (track.state != TrackState::alive || track_matched[t]) continue;
    track.frames_since_update += gap;
    if (track.frames_since_update > config_.keep_alive_frames)
      track.state = TrackState::dead;
  }

  // Unmatched detections spawn tracks in descending-score order, so ids
  // are assigned deterministically.
  for (std::size_t d = 0; d < selected.size(); ++d) {
    if (det_matched[d]) continue;
    const Detection& det = detections[selected[d]];
    Track track;
    track.id = next_track_id_++;
    track.class_id = det.class_id;
    track.history.push_back({frame_index, det});
    assignments.push_back({track.id, det});
    tracks_.push_back(std::move(track));
  }

  current_frame_ = frame_index;
  return assignments;
}

}  // namespace trackkit
