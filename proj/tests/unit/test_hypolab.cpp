#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "qae/core/error.hpp"
#include "qae/core/rng.hpp"
#include "qae/hypolab/angles.hpp"
#include "qae/hypolab/chi_squared.hpp"
#include "qae/hypolab/convergence.hpp"
#include "qae/hypolab/gaussian.hpp"
#include "qae/hypolab/mahalanobis.hpp"
#include "qae/hypolab/normality.hpp"
#include "qae/hypolab/reports.hpp"
#include "qae/hypolab/theorem.hpp"
#include "support/oracles.hpp"

using qae::Embedding;
using qae::Errc;
using namespace qae::hypolab;

namespace {

template <typename Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const qae::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected qae::Error";
  return Errc::InvalidArgument;
}

Embedding axis(std::size_t dim, std::size_t i) {
  std::vector<double> v(dim, 0.0);
  v[i] = 1.0;
  return Embedding(std::move(v));
}

// Unit queries around mu and a unit document offset from mu along `normal`.
ClusterSample spherical_cluster(std::size_t dim, std::size_t count, double sd, std::mt19937_64& gen) {
  const Embedding mu = axis(dim, 0);
  std::normal_distribution<double> nd(0.0, sd);
  ClusterSample s{mu, {}};
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> v(mu.values().begin(), mu.values().end());
    for (double& x : v) x += nd(gen);
    s.query_vectors.push_back(qae::normalize(Embedding(v)));
  }
  std::vector<double> d(dim, 0.0);
  d[0] = 1.0;
  d[1] = 0.6;
  s.document_vector = qae::normalize(Embedding(d));
  return s;
}

std::vector<double> std_normals(std::size_t n, std::uint64_t seed) {
  qae::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

// Anderson-Darling A2 written out with Boost's normal CDF.
double oracle_a2(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const boost::math::normal_distribution<double> dist(m, std::sqrt(ss / (n - 1)));
  std::sort(x.begin(), x.end());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = boost::math::cdf(dist, x[i]);
    const double hi = boost::math::cdf(boost::math::complement(dist, x[x.size() - 1 - i]));
    s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  return -n - s / n;
}

}  // namespace

TEST(AnglesTest, OrthogonalOffsetGivesRightAngles) {
  ClusterSample s{Embedding{0, 0, 0}, {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {0.5, 0.5, 0}}};
  const Embedding c = s.center();
  s.document_vector = c + 2.0 * Embedding{0, 0, 1};
  const auto report = angle_distribution(s);
  ASSERT_EQ(report.angles_deg.size(), 5u);
  for (double a : report.angles_deg) EXPECT_NEAR(a, 90.0, 1e-12);
  EXPECT_NEAR(report.mean_deg, 90.0, 1e-12);
  EXPECT_NEAR(report.std_deg, 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(report.fraction_in_band, 1.0);
}

TEST(AnglesTest, CollinearQueryGivesZeroAngle) {
  ClusterSample s{Embedding{0, 0, 0}, {{1, 0.2, 0}, {0, 1, 0.1}, {0.3, 0.3, 1}}};
  const Embedding c = s.center();
  s.document_vector = c + (s.query_vectors[0] - c);
  EXPECT_NEAR(angle_distribution(s).angles_deg[0], 0.0, 1e-6);
}

TEST(AnglesTest, SphericalClusterIsNearOrthogonal) {
  std::mt19937_64 gen(5);
  const auto s = spherical_cluster(256, 200, 0.05, gen);
  const auto report = angle_distribution(s);
  EXPECT_GE(report.mean_deg, 85.0);
  EXPECT_LE(report.mean_deg, 95.0);
  for (double a : report.angles_deg) {
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 180.0);
  }
}

TEST(AnglesTest, InvariantUnderRotation) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = spherical_cluster(12, 30, 0.2, gen);
    const auto q = qae::testing::random_orthogonal(12, 100 + trial);
    ClusterSample r{qae::testing::apply(q, s.document_vector), {}};
    for (const auto& v : s.query_vectors) r.query_vectors.push_back(qae::testing::apply(q, v));
    const auto a = angle_distribution(s);
    const auto b = angle_distribution(r);
    for (std::size_t i = 0; i < a.angles_deg.size(); ++i) EXPECT_NEAR(a.angles_deg[i], b.angles_deg[i], 1e-6);
    EXPECT_NEAR(a.mean_deg, b.mean_deg, 1e-6);
  }
}

TEST(AnglesTest, Errors) {
  ClusterSample one{Embedding{1, 0}, {{0, 1}}};
  EXPECT_EQ(error_code([&] { angle_distribution(one); }), Errc::InsufficientQueries);
  ClusterSample at_center{Embedding{0.5, 0.5}, {{1, 0}, {0, 1}}};
  EXPECT_EQ(error_code([&] { angle_distribution(at_center); }), Errc::DegenerateCluster);
  ClusterSample dims{Embedding{1, 0, 0}, {{1, 0}, {0, 1}}};
  EXPECT_EQ(error_code([&] { angle_distribution(dims); }), Errc::DimensionMismatch);
}

TEST(AnglesTest, SummaryStatistics) {
  const auto r = summarize_angles({70.0, 80.0, 90.0, 110.0});
  EXPECT_DOUBLE_EQ(r.mean_deg, 87.5);
  EXPECT_NEAR(r.std_deg, std::sqrt((17.5 * 17.5 + 7.5 * 7.5 + 2.5 * 2.5 + 22.5 * 22.5) / 4.0), 1e-12);
  EXPECT_DOUBLE_EQ(r.fraction_in_band, 0.5);
}

TEST(ConvergenceTest, FullReferenceSubsetIsExact) {
  std::mt19937_64 gen(7);
  std::vector<Embedding> qs;
  for (int i = 0; i < 80; ++i) qs.push_back(qae::testing::random_unit_vector(16, gen));
  const std::vector<std::size_t> ns{80};
  const auto curve = mc_convergence(qs, ns, 80, 10, 1);
  EXPECT_NEAR(curve[0].mean_similarity, 1.0, 1e-12);
}

TEST(ConvergenceTest, CurveIsNonDecreasing) {
  std::mt19937_64 gen(8);
  const Embedding mu = axis(32, 0);
  std::normal_distribution<double> nd(0.0, 0.08);
  std::vector<Embedding> qs;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v(mu.values().begin(), mu.values().end());
    for (double& x : v) x += nd(gen);
    qs.push_back(qae::normalize(Embedding(v)));
  }
  const std::vector<std::size_t> ns{1, 2, 5, 10, 20, 40, 80};
  const auto curve = mc_convergence(qs, ns, 80, 50, 3);
  ASSERT_EQ(curve.size(), ns.size());
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_GE(curve[i].mean_similarity, curve[i - 1].mean_similarity - 0.005);
  }
  EXPECT_NEAR(curve.back().mean_similarity, 1.0, 1e-12);
  EXPECT_EQ(mc_convergence(qs, ns, 80, 50, 3)[2].mean_similarity, curve[2].mean_similarity);
}

TEST(ConvergenceTest, Errors) {
  std::vector<Embedding> qs(10, Embedding{1, 0});
  const std::vector<std::size_t> too_big{11};
  EXPECT_EQ(error_code([&] { mc_convergence(qs, too_big, 10); }), Errc::InsufficientQueries);
  EXPECT_EQ(error_code([&] { mc_convergence(qs, too_big, 20); }), Errc::InsufficientQueries);
  const std::vector<std::size_t> zero{0};
  EXPECT_EQ(error_code([&] { mc_convergence(qs, zero, 10); }), Errc::InsufficientQueries);
}

TEST(MahalanobisTest, HandExamples) {
  const std::vector<Embedding> pair{{-1.0}, {1.0}};
  const auto r = mahalanobis_sq(pair, 0.0);
  EXPECT_DOUBLE_EQ(r.d2[0], 0.5);
  EXPECT_DOUBLE_EQ(r.d2[1], 0.5);
  EXPECT_EQ(r.subspace_dim, 1u);
  EXPECT_FALSE(r.projected);
  const std::vector<Embedding> with_mean{{-1.0, 2.0}, {0.0, 0.0}, {1.0, 1.0}, {0.0, -3.0}, {0.0, 0.0}};
  EXPECT_NEAR(mahalanobis_sq(with_mean, 0.0).d2[1], 0.0, 1e-15);
  EXPECT_NEAR(mahalanobis_sq(with_mean, 0.0).d2[4], 0.0, 1e-15);
}

TEST(MahalanobisTest, SumEqualsDofTimesCountMinusOne) {
  // With the unbiased covariance, sum_i D2_i = (n - 1) * p exactly.
  std::mt19937_64 gen(9);
  std::vector<Embedding> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(qae::testing::random_vector(6, gen));
  const auto r = mahalanobis_sq(pts, 0.0);
  double sum = 0.0;
  for (double d : r.d2) sum += d;
  EXPECT_NEAR(sum, 39.0 * 6.0, 1e-9);
}

TEST(MahalanobisTest, AffineInvariance) {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 2 + trial % 3;
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = u(gen);
    a += 3.0 * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd b(dim);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = u(gen);
    std::vector<Embedding> pts, mapped;
    for (int i = 0; i < 30; ++i) {
      const Embedding x = qae::testing::random_vector(dim, gen);
      pts.push_back(x);
      mapped.push_back(from_eigen(a * to_eigen(x) + b));
    }
    const auto r1 = mahalanobis_sq(pts, 0.0);
    const auto r2 = mahalanobis_sq(mapped, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(r1.d2[i], r2.d2[i], 1e-8 * (1.0 + r1.d2[i]));
  }
}

TEST(MahalanobisTest, ProjectsWhenFewerSamplesThanDims) {
  std::mt19937_64 gen(11);
  std::vector<Embedding> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(qae::testing::random_vector(50, gen));
  const auto r = mahalanobis_sq(pts, 0.0);
  EXPECT_TRUE(r.projected);
  EXPECT_EQ(r.subspace_dim, 9u);
  double sum = 0.0;
  for (double d : r.d2) sum += d;
  EXPECT_NEAR(sum, 9.0 * 9.0, 1e-8);
  EXPECT_EQ(error_code([&] { mahalanobis_sq(pts, 0.0, false); }), Errc::SingularCovariance);
  EXPECT_NO_THROW(mahalanobis_sq(pts, default_regularization(pts), false));
  EXPECT_EQ(error_code([&] { mahalanobis_sq(std::vector<Embedding>{{1.0}}, 0.0); }), Errc::TooFewSamples);
}

TEST(MahalanobisTest, GaussianSamplesFollowChiSquared) {
  const auto pts = sample_gaussian(Embedding{0, 0, 0, 0, 0}, Covariance::isotropic(1.0), 10000, 77);
  const auto r = mahalanobis_sq(pts, 0.0);
  const boost::math::chi_squared_distribution<double> chi(5.0);
  const double ks = ks_statistic(r.d2, [&](double x) { return boost::math::cdf(chi, x); });
  EXPECT_LT(ks, 0.02);
}

TEST(ChiSquaredTest, FunctionsMatchBoost) {
  for (double a : {0.5, 1.0, 2.5, 7.0, 30.0}) {
    EXPECT_NEAR(log_gamma(a), std::lgamma(a), 1e-12 * (1.0 + std::abs(std::lgamma(a))));
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 40.0}) {
      EXPECT_NEAR(regularized_gamma_p(a, x), boost::math::gamma_p(a, x), 1e-12);
      EXPECT_NEAR(regularized_gamma_q(a, x), boost::math::gamma_q(a, x), 1e-12);
    }
  }
  for (int dof : {1, 2, 5, 10, 64}) {
    const boost::math::chi_squared_distribution<double> chi(dof);
    for (double p : {0.001, 0.05, 0.5, 0.95, 0.999}) {
      const double want = boost::math::quantile(chi, p);
      EXPECT_NEAR(chi_squared_quantile(p, dof), want, 1e-8 * std::max(1.0, want));
      EXPECT_NEAR(chi_squared_cdf(want, dof), p, 1e-12);
    }
  }
}

TEST(ChiSquaredTest, MedianOfTwoDofIsTwoLnTwo) {
  EXPECT_NEAR(chi_squared_quantile(0.5, 2), 2.0 * std::log(2.0), 1e-9);
  EXPECT_NEAR(chi_squared_quantile(0.5, 2), 1.3863, 1e-4);
}

TEST(ChiSquaredQqTest, SingleValuePairsWithMedian) {
  const std::vector<double> v{3.0};
  const auto qq = chisq_qq(v, 4);
  ASSERT_EQ(qq.size(), 1u);
  EXPECT_NEAR(qq[0].theoretical, chi_squared_quantile(0.5, 4), 1e-12);
  EXPECT_EQ(qq[0].empirical, 3.0);
}

TEST(ChiSquaredQqTest, ExactQuantilesLieOnTheDiagonal) {
  const int n = 2000;
  std::vector<double> v;
  const boost::math::chi_squared_distribution<double> chi(3.0);
  for (int i = 0; i < n; ++i) v.push_back(boost::math::quantile(chi, (i + 0.5) / n));
  std::mt19937_64 gen(1);
  std::shuffle(v.begin(), v.end(), gen);
  for (const auto& p : chisq_qq(v, 3)) EXPECT_LT(std::abs(p.empirical - p.theoretical) / p.theoretical, 1e-6);
}

TEST(ChiSquaredQqTest, SimulatedSampleHugsTheDiagonal) {
  qae::Rng rng(2);
  std::vector<double> v(100000);
  for (double& x : v) {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double z = rng.normal();
      s += z * z;
    }
    x = s;
  }
  const auto qq = chisq_qq(v, 5);
  ASSERT_EQ(qq.size(), v.size());
  double worst = 0.0;
  for (std::size_t i = v.size() / 100; i < v.size() - v.size() / 100; ++i) {
    worst = std::max(worst, std::abs(qq[i].empirical - qq[i].theoretical) / qq[i].theoretical);
  }
  EXPECT_LT(worst, 0.05);
  for (std::size_t i = 1; i < qq.size(); ++i) EXPECT_LE(qq[i - 1].empirical, qq[i].empirical);
}

TEST(AndersonDarlingTest, MatchesOracleFormula) {
  const auto x = std_normals(500, 3);
  const auto r = anderson_darling(x);
  EXPECT_NEAR(r.a2, oracle_a2(x), 1e-9);
  EXPECT_NEAR(r.a2_star, r.a2 * (1.0 + 4.0 / 500 - 25.0 / (500.0 * 500.0)), 1e-12);
  EXPECT_EQ(r.reject_at_5pct, r.a2_star > 0.787);
}

TEST(AndersonDarlingTest, NormalSamplesRarelyRejected) {
  int accepted = 0;
  const int runs = 100;
  for (int s = 0; s < runs; ++s) accepted += anderson_darling(std_normals(10000, 1000 + s)).reject_at_5pct ? 0 : 1;
  EXPECT_GE(accepted, 94);
}

TEST(AndersonDarlingTest, UniformSamplesRejected) {
  qae::Rng rng(4);
  std::vector<double> u(10000);
  for (double& x : u) x = rng.uniform();
  EXPECT_TRUE(anderson_darling(u).reject_at_5pct);
}

TEST(AndersonDarlingTest, Errors) {
  EXPECT_EQ(error_code([] { anderson_darling(std::vector<double>(20, 1.5)); }), Errc::ZeroVariance);
  EXPECT_EQ(error_code([] { anderson_darling(std::vector<double>{1, 2, 3, 4, 5, 6, 7}); }), Errc::TooFewSamples);
}

TEST(AndersonDarlingTest, MarginalsOnePerDimension) {
  const auto pts = sample_gaussian(Embedding{0, 1, 2}, Covariance::diagonal({1.0, 4.0, 0.25}), 2000, 5);
  const auto results = anderson_darling_marginals(pts);
  EXPECT_EQ(results.size(), 3u);
}

TEST(GaussianTest, SampleMomentsMatch) {
  Eigen::MatrixXd s(2, 2);
  s << 2.0, 0.6, 0.6, 0.5;
  const auto pts = sample_gaussian(Embedding{1.0, -1.0}, Covariance::full(s), 200000, 6);
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  for (const auto& p : pts) m += to_eigen(p);
  m /= static_cast<double>(pts.size());
  Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector2d d = to_eigen(p) - m;
    c += d * d.transpose();
  }
  c /= static_cast<double>(pts.size() - 1);
  EXPECT_NEAR(m(0), 1.0, 0.01);
  EXPECT_NEAR(m(1), -1.0, 0.01);
  EXPECT_NEAR(c(0, 0), 2.0, 0.03);
  EXPECT_NEAR(c(0, 1), 0.6, 0.01);
  EXPECT_NEAR(c(1, 1), 0.5, 0.01);
}

TEST(GaussianTest, SemiDefiniteCovarianceIsSupported) {
  Eigen::MatrixXd s(2, 2);
  s << 1.0, 1.0, 1.0, 1.0;
  const auto pts = sample_gaussian(Embedding{0.0, 0.0}, Covariance::full(s), 100, 7);
  for (const auto& p : pts) EXPECT_NEAR(p[0], p[1], 1e-9);
}

TEST(GaussianTest, InvalidCovariances) {
  EXPECT_EQ(error_code([] { Covariance::isotropic(-1.0); }), Errc::InvalidCovariance);
  EXPECT_EQ(error_code([] { Covariance::diagonal({1.0, -0.1}); }), Errc::InvalidCovariance);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  EXPECT_EQ(error_code([&] { Covariance::full(asym); }), Errc::InvalidCovariance);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  EXPECT_EQ(error_code([&] { Covariance::full(indefinite); }), Errc::InvalidCovariance);
  EXPECT_EQ(error_code([] { Covariance::diagonal({1.0, 2.0}).check_dim(3); }), Errc::InvalidCovariance);
}

TEST(GaussianTest, RandomUnitOrthogonal) {
  qae::Rng rng(8);
  const Embedding a = random_unit(10, rng);
  EXPECT_NEAR(a.norm(), 1.0, 1e-12);
  const Embedding w = random_unit_orthogonal(a, rng);
  EXPECT_NEAR(w.norm(), 1.0, 1e-12);
  EXPECT_NEAR(qae::dot(a, w), 0.0, 1e-12);
}

TEST(TheoremTest, ZeroAngleGivesZeroDifference) {
  const GaussianSpec spec{axis(16, 0), Covariance::isotropic(0.01), 0.0};
  const std::vector<double> ts{0.1};
  const auto r = theorem_check(spec, ts, 5000, 1);
  EXPECT_EQ(r.max_abs_difference, 0.0);
  EXPECT_EQ(r.document, spec.mu);
  EXPECT_EQ(r.positive_fraction, 0.0);
}

TEST(TheoremTest, TailsStayBelowBounds) {
  const std::vector<double> ts{0.05, 0.1, 0.2, 0.4};
  for (std::size_t dim : {8u, 64u}) {
    for (double var : {0.01, 0.05}) {
      qae::Rng rng(dim);
      const GaussianSpec spec{random_unit(dim, rng), Covariance::isotropic(var), 60.0};
      const auto r = theorem_check(spec, ts, 20000, 9);
      EXPECT_NEAR(r.d_sigma_d, var, 1e-12);
      EXPECT_NEAR(r.mu_sigma_mu, var, 1e-12);
      EXPECT_NEAR(qae::cosine(r.document, spec.mu), 0.5, 1e-12);
      for (const auto& row : r.rows) {
        EXPECT_LE(row.empirical_doc, row.bound_doc);
        EXPECT_LE(row.empirical_mean, row.bound_mean);
      }
    }
  }
}

TEST(TheoremTest, SixtyDegreesIsAlmostAlwaysPositive) {
  const GaussianSpec spec{axis(16, 3), Covariance::isotropic(0.01), 60.0};
  const std::vector<double> ts{0.1};
  const auto r = theorem_check(spec, ts, 20000, 2);
  EXPECT_GT(r.positive_fraction, 0.99);
}

TEST(TheoremTest, Errors) {
  const std::vector<double> ts{0.1};
  const GaussianSpec ok{axis(4, 0), Covariance::isotropic(0.01), 30.0};
  EXPECT_EQ(error_code([&] { theorem_check(ok, ts, 999, 1); }), Errc::InvalidArgument);
  const GaussianSpec not_unit{Embedding{2, 0, 0, 0}, Covariance::isotropic(0.01), 30.0};
  EXPECT_EQ(error_code([&] { theorem_check(not_unit, ts, 1000, 1); }), Errc::InvalidArgument);
  const GaussianSpec wrong_dim{axis(4, 0), Covariance::diagonal({0.1, 0.1}), 30.0};
  EXPECT_EQ(error_code([&] { theorem_check(wrong_dim, ts, 1000, 1); }), Errc::InvalidCovariance);
  const std::vector<double> bad_t{0.0};
  EXPECT_EQ(error_code([&] { theorem_check(ok, bad_t, 1000, 1); }), Errc::InvalidArgument);
}

TEST(ReportsTest, CsvHeadersAndRows) {
  std::ostringstream angles;
  write_angles_csv(angles, summarize_angles({80.0, 90.0}));
  const std::string angle_csv = angles.str();
  EXPECT_EQ(angle_csv.substr(0, angle_csv.find('\n')), "query_index,angle_deg");
  EXPECT_EQ(std::count(angle_csv.begin(), angle_csv.end(), '\n'), 3);

  std::ostringstream curve;
  const std::vector<ConvergencePoint> pts{{1, 0.5}, {2, 0.75}};
  write_convergence_csv(curve, pts);
  EXPECT_EQ(curve.str(), "n,mean_similarity\n1,0.5\n2,0.75\n");

  std::ostringstream qq;
  const std::vector<QqPair> pairs{{1.0, 2.0}};
  write_qq_csv(qq, pairs);
  EXPECT_EQ(qq.str(), "theoretical_quantile,empirical_quantile\n1,2\n");

  const GaussianSpec spec{axis(4, 0), Covariance::isotropic(0.01), 0.0};
  const std::vector<double> ts{0.1, 0.2};
  const auto thm = theorem_check(spec, ts, 1000, 3);
  std::ostringstream t;
  write_theorem_csv(t, thm);
  EXPECT_EQ(t.str().substr(0, t.str().find('\n')), "t,empirical_doc,bound_doc,empirical_mean,bound_mean");
  EXPECT_TRUE(to_json(thm).at("within_bounds").get<bool>());

  std::ostringstream clusters;
  const std::vector<ClusterSample> cs{{Embedding{1, 0}, {{0, 1}, {1, 1}}}};
  write_cluster_embeddings_csv(clusters, cs);
  EXPECT_EQ(clusters.str(), "cluster,role,index,x0,x1\n0,document,0,1,0\n0,query,0,0,1\n0,query,1,1,1\n0,center,0,0.5,1\n");
}
