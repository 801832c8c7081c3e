#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trackkit {

/// Appearance embedding. Dimension is fixed per batch/clip; entries finite.
using Embedding = std::vector<double>;

/// Non-squared L2 distance. Throws std::invalid_argument on dimension
/// mismatch.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// 1 - cos(angle between a and b), in [0, 2]. Throws std::invalid_argument
/// when either vector is zero (direction undefined).
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// Overflow-stable ln(1 + e^x).
double softplus(double x);

/// One batch of identity-labelled embeddings. Elements from different
/// clips never pair with each other.
struct TripletBatch {
  std::vector<Embedding> embeddings;
  std::vector<std::int64_t> track_ids;
  std::vector<std::int64_t> clip_ids;
  double margin = 0.1;
};

struct BatchHardLoss {
  double value = 0.0;
  /// Anchors that had no same-clip negative and contributed nothing.
  std::size_t anchors_without_negative = 0;
};

/// Sum over anchors j of softplus(margin + hardest_positive(j) -
/// hardest_negative(j)), where the hardest positive is the farthest
/// same-track element (including j itself, so singleton tracks are
/// well-defined at distance 0) and the hardest negative is the nearest
/// other-track element. Only same-clip elements are eligible on either
/// side.
BatchHardLoss batchhard_loss(const TripletBatch& batch);

/// Reference result computed by exhaustively enumerating every
/// (anchor, positive, negative) triple with plain scalar arithmetic.
/// Deliberately independent of the kernel-backed path; used by the
/// loss-check command and the test suite.
BatchHardLoss batchhard_loss_reference(const TripletBatch& batch);

struct Triplet {
  std::size_t anchor;
  std::size_t positive;
  std::size_t negative;
};

/// Draws `count` (anchor, hardest positive, hardest negative) triples over
/// the eligible anchors (those with at least one same-clip negative).
/// Anchors are drawn uniformly without replacement until exhausted, then
/// with replacement. Deterministic given rng_seed. Returns an empty list
/// when no anchor is eligible.
std::vector<Triplet> sample_training_triplets(const TripletBatch& batch,
                                              std::size_t count,
                                              std::uint64_t rng_seed);

}  // namespace trackkit
