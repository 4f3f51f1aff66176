#pragma once

#include <vector>

#include "qae/core/embedding.hpp"

namespace qae::hypolab {

/// A document embedding with embeddings of its predicted queries.
struct ClusterSample {
  Embedding document_vector;
  std::vector<Embedding> query_vectors;

  /// Raw (unnormalized) arithmetic mean of the query vectors.
  Embedding center() const;
};

struct AngleReport {
  std::vector<double> angles_deg;
  double mean_deg = 0.0;
  double std_deg = 0.0;  // population standard deviation
  double fraction_in_band = 0.0;
  double band_low_deg = 75.0;
  double band_high_deg = 100.0;
};

/// Summary statistics over precomputed angles, e.g. pooled across documents.
AngleReport summarize_angles(std::vector<double> angles_deg, double band_low_deg = 75.0,
                             double band_high_deg = 100.0);

/// Angles between v_d = d - c and every v_qi = q_i - c, where c is the raw
/// query mean. Throws InsufficientQueries (< 2 queries), DimensionMismatch, or
/// DegenerateCluster when v_d or some v_qi has norm <= 1e-12.
AngleReport angle_distribution(const ClusterSample& sample, double band_low_deg = 75.0,
                               double band_high_deg = 100.0);

}  // namespace qae::hypolab
