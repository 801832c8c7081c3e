#include "trackkit/metric_learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "trackkit/kernels.hpp"

namespace trackkit {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("embedding dimension mismatch");
  return std::sqrt(kernels::squared_l2(a.data(), b.data(), a.size()));
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("embedding dimension mismatch");
  const double na = kernels::dot(a.data(), a.data(), a.size());
  const double nb = kernels::dot(b.data(), b.data(), b.size());
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("cosine distance of a zero vector is undefined");
  const double c = kernels::dot(a.data(), b.data(), a.size()) / std::sqrt(na * nb);
  return std::clamp(1.0 - c, 0.0, 2.0);
}

double softplus(double x) {
  // max(x,0) + log1p(e^-|x|) never overflows.
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

namespace {

void validate_batch(const TripletBatch& batch) {
  const std::size_t n = batch.embeddings.size();
  if (batch.track_ids.size() != n || batch.clip_ids.size() != n)
    throw std::invalid_argument("batch lists must have equal length");
  if (batch.margin < 0.0)
    throw std::invalid_argument("margin must be non-negative");
  for (std::size_t i = 1; i < n; ++i) {
    if (batch.embeddings[i].size() != batch.embeddings[0].size())
      throw std::invalid_argument("embedding dimension mismatch within batch");
  }
}

// Hardest positive / hardest negative for anchor j given a pairwise
// distance lookup. Returns false when j has no same-clip negative.
template <typename DistFn>
bool batchhard_extremes(const TripletBatch& batch, std::size_t j, DistFn&& dist,
                        double& hardest_positive, double& hardest_negative) {
  const std::size_t n = batch.embeddings.size();
  hardest_positive = 0.0;  // p = j always qualifies at distance 0
  hardest_negative = std::numeric_limits<double>::infinity();
  for (std::size_t other = 0; other < n; ++other) {
    if (batch.clip_ids[other] != batch.clip_ids[j]) continue;
    const double d = dist(j, other);
    if (batch.track_ids[other] == batch.track_ids[j]) {
      hardest_positive = std::max(hardest_positive, d);
    } else {
      hardest_negative = std::min(hardest_negative, d);
    }
  }
  return std::isfinite(hardest_negative);
}

}  // namespace

BatchHardLoss batchhard_loss(const TripletBatch& batch) {
  validate_batch(batch);
  const std::size_t n = batch.embeddings.size();
  const std::size_t dim = n ? batch.embeddings[0].size() : 0;

  // Pairwise distances via the kernel path, computed once.
  std::vector<double> dmat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(kernels::squared_l2(
          batch.embeddings[i].data(), batch.embeddings[j].data(), dim));
      dmat[i * n + j] = d;
      dmat[j * n + i] = d;
    }
  }

  BatchHardLoss out;
  for (std::size_t j = 0; j < n; ++j) {
    double hp = 0.0, hn = 0.0;
    if (!batchhard_extremes(batch, j,
                            [&](std::size_t a, std::size_t b) { return dmat[a * n + b]; },
                            hp, hn)) {
      ++out.anchors_without_negative;
      continue;
    }
    out.value += softplus(batch.margin + hp - hn);
  }
  return out;
}

BatchHardLoss batchhard_loss_reference(const TripletBatch& batch) {
  validate_batch(batch);
  const std::size_t n = batch.embeddings.size();

  const auto naive_distance = [&](std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < batch.embeddings[a].size(); ++k) {
      const double d = batch.embeddings[a][k] - batch.embeddings[b][k];
      acc += d * d;
    }
    return std::sqrt(acc);
  };

  BatchHardLoss out;
  for (std::size_t j = 0; j < n; ++j) {
    // Enumerate every (positive, negative) pair for j and keep the extremes.
    double hp = 0.0;
    double hn = std::numeric_limits<double>::infinity();
    bool has_negative = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (batch.clip_ids[p] != batch.clip_ids[j]) continue;
      if (batch.track_ids[p] != batch.track_ids[j]) continue;
      for (std::size_t l = 0; l < n; ++l) {
        if (batch.clip_ids[l] != batch.clip_ids[j]) continue;
        if (batch.track_ids[l] == batch.track_ids[j]) continue;
        has_negative = true;
        hp = std::max(hp, naive_distance(j, p));
        hn = std::min(hn, naive_distance(j, l));
      }
    }
    if (!has_negative) {
      ++out.anchors_without_negative;
      continue;
    }
    out.value += softplus(batch.margin + hp - hn);
  }
  return out;
}

std::vector<Triplet> sample_training_triplets(const TripletBatch& batch,
                                              std::size_t count,
                                              std::uint64_t rng_seed) {
  validate_batch(batch);
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const std::size_t n = batch.embeddings.size();
  const std::size_t dim = n ? batch.embeddings[0].size() : 0;

  const auto dist = [&](std::size_t a, std::size_t b) {
    return std::sqrt(kernels::squared_l2(
        batch.embeddings[a].data(), batch.embeddings[b].data(), dim));
  };

  // Precompute the BatchHard extremes for every eligible anchor. Ties
  // break toward the lower index.
  std::vector<Triplet> per_anchor;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best_p = j, best_n = 0;
    double hp = 0.0;
    double hn = std::numeric_limits<double>::infinity();
    for (std::size_t other = 0; other < n; ++other) {
      if (batch.clip_ids[other] != batch.clip_ids[j]) continue;
      const double d = dist(j, other);
      if (batch.track_ids[other] == batch.track_ids[j]) {
        if (d > hp) {
          hp = d;
          best_p = other;
        }
      } else if (d < hn) {
        hn = d;
        best_n = other;
      }
    }
    if (std::isfinite(hn)) per_anchor.push_back({j, best_p, best_n});
  }
  if (per_anchor.empty()) return {};

  std::mt19937_64 rng(rng_seed);

  // One shuffled pass without replacement, then uniform draws.
  std::vector<std::size_t> order(per_anchor.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }

  std::vector<Triplet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count && i < order.size(); ++i)
    out.push_back(per_anchor[order[i]]);
  std::uniform_int_distribution<std::size_t> pick(0, per_anchor.size() - 1);
  while (out.size() < count) out.push_back(per_anchor[pick(rng)]);
  return out;
}

}  // namespace trackkit
