#include "qae/hypolab/angles.hpp"

#include <cmath>
#include <string>

#include "qae/core/error.hpp"

namespace qae::hypolab {

Embedding ClusterSample::center() const { return mean(query_vectors); }

AngleReport summarize_angles(std::vector<double> angles_deg, double band_low_deg,
                             double band_high_deg) {
  if (angles_deg.empty()) throw Error(Errc::InsufficientQueries, "no angles to summarize");
  AngleReport r;
  r.angles_deg = std::move(angles_deg);
  r.band_low_deg = band_low_deg;
  r.band_high_deg = band_high_deg;
  double sum = 0.0, in_band = 0.0;
  for (double a : r.angles_deg) {
    sum += a;
    if (a >= band_low_deg && a <= band_high_deg) in_band += 1.0;
  }
  const double n = static_cast<double>(r.angles_deg.size());
  r.mean_deg = sum / n;
  double ss = 0.0;
  for (double a : r.angles_deg) ss += (a - r.mean_deg) * (a - r.mean_deg);
  r.std_deg = std::sqrt(ss / n);
  r.fraction_in_band = in_band / n;
  return r;
}

AngleReport angle_distribution(const ClusterSample& sample, double band_low_deg,
                               double band_high_deg) {
  if (sample.query_vectors.size() < 2) {
    throw Error(Errc::InsufficientQueries, "angle statistics need at least 2 query vectors");
  }
  for (const auto& q : sample.query_vectors) {
    if (q.dim() != sample.document_vector.dim()) {
      throw Error(Errc::DimensionMismatch, "query and document dimensions differ");
    }
  }
  const Embedding c = sample.center();
  const Embedding vd = sample.document_vector - c;
  if (vd.norm() <= kZeroNormEpsilon) {
    throw Error(Errc::DegenerateCluster, "document coincides with the cluster center");
  }

  std::vector<double> angles;
  angles.reserve(sample.query_vectors.size());
  for (std::size_t i = 0; i < sample.query_vectors.size(); ++i) {
    const Embedding vq = sample.query_vectors[i] - c;
    if (vq.norm() <= kZeroNormEpsilon) {
      throw Error(Errc::DegenerateCluster, "query " + std::to_string(i) + " coincides with the center");
    }
    angles.push_back(angle_degrees(vd, vq));
  }
  return summarize_angles(std::move(angles), band_low_deg, band_high_deg);
}

}  // namespace qae::hypolab
