#include "trackkit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "trackkit/kernels.hpp"

namespace trackkit {

namespace {

// Prototypes are rejection-sampled to pairwise cosine distance >= 0.8,
// which keeps inter-identity distances well above the default tracker
// gate for noise sigma up to ~0.2.
constexpr double kPrototypeMinCosineDistance = 0.8;
constexpr int kPrototypeAttempts = 500;
constexpr int kPlacementAttempts = 200;

struct Trajectory {
  double cx0 = 0, cy0 = 0;
  double vx = 0, vy = 0;
  double w = 0, h = 0;

  Box box_at(std::int64_t t) const {
    const double cx = cx0 + vx * static_cast<double>(t);
    const double cy = cy0 + vy * static_cast<double>(t);
    return {cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0};
  }
};

Embedding random_unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Embedding v(dim);
  while (true) {
    double norm_sq = 0.0;
    for (int k = 0; k < dim; ++k) {
      v[k] = normal(rng);
      norm_sq += v[k] * v[k];
    }
    if (norm_sq > 0.0) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (double& x : v) x *= inv;
      return v;
    }
  }
}

std::vector<Embedding> sample_prototypes(int count, int dim, std::mt19937_64& rng) {
  std::vector<Embedding> protos;
  protos.reserve(count);
  for (int i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPrototypeAttempts && !placed; ++attempt) {
      Embedding cand = random_unit_vector(dim, rng);
      bool ok = true;
      for (const auto& p : protos) {
        const double dot = kernels::dot(cand.data(), p.data(), cand.size());
        if (1.0 - dot < kPrototypeMinCosineDistance) {
          ok = false;
          break;
        }
      }
      if (ok) {
        protos.push_back(std::move(cand));
        placed = true;
      }
    }
    if (!placed)
      throw std::invalid_argument(
          "embedding_dim/num_objects: cannot separate identity prototypes");
  }
  return protos;
}

Embedding noisy_embedding(const Embedding& prototype, double sigma,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Embedding e = prototype;
  double norm_sq = 0.0;
  for (double& x : e) {
    x += sigma * normal(rng);
    norm_sq += x * x;
  }
  if (norm_sq <= 0.0) return prototype;
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& x : e) x *= inv;
  return e;
}

bool occluded_at(const SimulationConfig& config, int object, std::int64_t t) {
  for (const auto& w : config.occlusion_windows) {
    if (w.object_index == object && t >= w.start_frame && t < w.end_frame)
      return true;
  }
  return false;
}

// Shared emission stage: trajectories -> per-frame gt and noisy detections.
GroundTruthClip emit_clip(const SimulationConfig& config,
                          const std::vector<Trajectory>& trajectories,
                          std::vector<Embedding> prototypes,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> true_score(0.55, 1.0);
  std::uniform_real_distribution<double> fp_score(0.1, 0.5);

  GroundTruthClip clip;
  clip.identity_prototypes = std::move(prototypes);
  clip.gt_frames.resize(config.num_frames);
  clip.detection_frames.resize(config.num_frames);

  for (std::int64_t t = 0; t < config.num_frames; ++t) {
    for (int i = 0; i < config.num_objects; ++i) {
      if (occluded_at(config, i, t)) continue;
      const Box gt_box = trajectories[i].box_at(t);
      clip.gt_frames[t].push_back({i, gt_box});

      if (unit(rng) < config.detection_dropout) continue;

      Box det_box = gt_box;
      if (config.box_jitter_sigma > 0.0) {
        det_box.xmin += config.box_jitter_sigma * normal(rng);
        det_box.ymin += config.box_jitter_sigma * normal(rng);
        det_box.xmax += config.box_jitter_sigma * normal(rng);
        det_box.ymax += config.box_jitter_sigma * normal(rng);
        if (det_box.xmin > det_box.xmax) std::swap(det_box.xmin, det_box.xmax);
        if (det_box.ymin > det_box.ymax) std::swap(det_box.ymin, det_box.ymax);
      }
      Detection det;
      det.box = det_box;
      det.class_id = 0;
      det.embedding = noisy_embedding(clip.identity_prototypes[i],
                                      config.embedding_noise_sigma, rng);
      det.score = true_score(rng);
      det.frame_index = t;
      clip.detection_frames[t].push_back(std::move(det));
    }

    if (config.false_positive_rate > 0.0) {
      std::poisson_distribution<int> poisson(config.false_positive_rate);
      const int fp_count = poisson(rng);
      std::uniform_real_distribution<double> coord(0.0, config.image_size);
      std::uniform_real_distribution<double> size(config.object_size_min,
                                                  config.object_size_max);
      for (int f = 0; f < fp_count; ++f) {
        const double cx = coord(rng), cy = coord(rng);
        const double w = size(rng), h = size(rng);
        Detection det;
        det.box = {cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0};
        det.class_id = 0;
        det.embedding = random_unit_vector(config.embedding_dim, rng);
        det.score = fp_score(rng);
        det.frame_index = t;
        clip.detection_frames[t].push_back(std::move(det));
      }
    }
  }
  return clip;
}

}  // namespace

void validate(const SimulationConfig& config) {
  if (config.num_objects < 0)
    throw std::invalid_argument("num_objects must be >= 0");
  if (config.num_frames < 0)
    throw std::invalid_argument("num_frames must be >= 0");
  if (config.image_size <= 0.0)
    throw std::invalid_argument("image_size must be positive");
  if (config.speed_min < 0.0 || config.speed_max < config.speed_min)
    throw std::invalid_argument("speed_min/speed_max range invalid");
  if (config.object_size_min <= 0.0 || config.object_size_max < config.object_size_min)
    throw std::invalid_argument("object_size_min/object_size_max range invalid");
  if (config.object_size_max > config.image_size)
    throw std::invalid_argument("object_size_max: objects cannot fit the image");
  if (config.embedding_dim < 1)
    throw std::invalid_argument("embedding_dim must be >= 1");
  if (config.embedding_noise_sigma < 0.0)
    throw std::invalid_argument("embedding_noise_sigma must be >= 0");
  if (config.box_jitter_sigma < 0.0)
    throw std::invalid_argument("box_jitter_sigma must be >= 0");
  if (config.detection_dropout < 0.0 || config.detection_dropout > 1.0)
    throw std::invalid_argument("detection_dropout must be in [0,1]");
  if (config.false_positive_rate < 0.0)
    throw std::invalid_argument("false_positive_rate must be >= 0");
  for (const auto& w : config.occlusion_windows) {
    if (w.object_index < 0 || w.object_index >= config.num_objects)
      throw std::invalid_argument("occlusion_windows: object index out of range");
    if (w.start_frame < 0 || w.end_frame < w.start_frame ||
        w.end_frame > config.num_frames)
      throw std::invalid_argument("occlusion_windows: window outside [0, num_frames)");
  }
  for (const auto& [a, b] : config.crossing_pairs) {
    if (a < 0 || a >= config.num_objects || b < 0 || b >= config.num_objects || a == b)
      throw std::invalid_argument("crossing_pairs: invalid object pair");
  }
}

GroundTruthClip generate_clip(const SimulationConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.rng_seed);

  auto prototypes = sample_prototypes(config.num_objects, config.embedding_dim, rng);

  const double horizon =
      static_cast<double>(std::max<std::int64_t>(config.num_frames - 1, 0));
  std::uniform_real_distribution<double> size_dist(config.object_size_min,
                                                   config.object_size_max);
  std::uniform_real_distribution<double> speed_dist(config.speed_min, config.speed_max);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * 3.14159265358979323846);

  // Start positions are drawn so the whole constant-velocity path stays
  // inside the image.
  std::vector<Trajectory> trajectories(config.num_objects);
  for (int i = 0; i < config.num_objects; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      Trajectory traj;
      traj.w = size_dist(rng);
      traj.h = size_dist(rng);
      const double speed = speed_dist(rng);
      const double angle = angle_dist(rng);
      traj.vx = speed * std::cos(angle);
      traj.vy = speed * std::sin(angle);

      const double xlo = traj.w / 2.0 - std::min(0.0, traj.vx * horizon);
      const double xhi = config.image_size - traj.w / 2.0 - std::max(0.0, traj.vx * horizon);
      const double ylo = traj.h / 2.0 - std::min(0.0, traj.vy * horizon);
      const double yhi = config.image_size - traj.h / 2.0 - std::max(0.0, traj.vy * horizon);
      if (xlo > xhi || ylo > yhi) continue;

      traj.cx0 = std::uniform_real_distribution<double>(xlo, xhi)(rng);
      traj.cy0 = std::uniform_real_distribution<double>(ylo, yhi)(rng);
      trajectories[i] = traj;
      placed = true;
    }
    if (!placed)
      throw std::invalid_argument(
          "speed/object_size/num_frames: objects cannot fit the image");
  }

  // Forced crossings: retarget b so both paths meet at the clip midpoint.
  const double t_mid = horizon / 2.0;
  for (const auto& [a, b] : config.crossing_pairs) {
    const Trajectory& ta = trajectories[a];
    Trajectory& tb = trajectories[b];
    const double mx = ta.cx0 + ta.vx * t_mid;
    const double my = ta.cy0 + ta.vy * t_mid;
    tb.cx0 = mx - tb.vx * t_mid;
    tb.cy0 = my - tb.vy * t_mid;
    for (const double t : {0.0, horizon}) {
      const double cx = tb.cx0 + tb.vx * t;
      const double cy = tb.cy0 + tb.vy * t;
      if (cx - tb.w / 2.0 < 0.0 || cx + tb.w / 2.0 > config.image_size ||
          cy - tb.h / 2.0 < 0.0 || cy + tb.h / 2.0 > config.image_size)
        throw std::invalid_argument("crossing_pairs: forced path leaves the image");
    }
  }

  return emit_clip(config, trajectories, std::move(prototypes), rng);
}

std::int64_t crossing_frame() { return 10; }

GroundTruthClip crossing_scenario(std::uint64_t seed) {
  // Fast object A overtakes slow object B head-on. Speeds 18 vs 6 with the
  // meeting point at t=9.75 put A exactly on B's frame-9 position at frame
  // 10, where the ground-truth pair IOU is 54/66 ~ 0.82.
  SimulationConfig config;
  config.num_objects = 2;
  config.num_frames = 20;
  config.image_size = 800.0;
  config.object_size_min = 60.0;
  config.object_size_max = 60.0;
  config.embedding_dim = 16;
  config.embedding_noise_sigma = 0.1;
  config.box_jitter_sigma = 1.0;
  config.detection_dropout = 0.0;
  config.false_positive_rate = 0.0;
  config.rng_seed = seed;
  validate(config);

  std::mt19937_64 rng(seed);
  std::vector<Embedding> prototypes;
  prototypes.push_back(random_unit_vector(config.embedding_dim, rng));
  Embedding opposite = prototypes[0];
  for (double& x : opposite) x = -x;
  prototypes.push_back(std::move(opposite));

  std::vector<Trajectory> trajectories(2);
  trajectories[0] = {100.0, 400.0, 18.0, 0.0, 60.0, 60.0};
  trajectories[1] = {334.0, 400.0, -6.0, 0.0, 60.0, 60.0};

  return emit_clip(config, trajectories, std::move(prototypes), rng);
}

}  // namespace trackkit
