#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "gpmap/geometry.hpp"

namespace gpmap {

struct Observation {
  Point2 location;
  double value = 0.0;
};

struct GpHyperparams {
  double signal_variance = 1.0;  // sigma^2
  double length_scale = 1.0;     // l, in field units
  double noise_variance = 1e-6;  // sigma_n^2

  bool valid() const {
    return std::isfinite(signal_variance) && signal_variance > 0.0 &&
           std::isfinite(length_scale) && length_scale > 0.0 &&
           std::isfinite(noise_variance) && noise_variance >= 0.0;
  }
};

inline constexpr double kDefaultNoiseVariance = 1e-6;

// Default length scale ties smoothness to the domain scale: one fifth of the side.
inline double default_length_scale(double side) { return side / 5.0; }

struct FactorizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Squared-exponential covariance: sigma^2 * exp(-|a-b|^2 / (2 l^2)).
double kernel(const Point2& a, const Point2& b, const GpHyperparams& h);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact GP regression with zero prior mean. A fitted model is immutable; fitting
// returns a fresh value (safe for concurrent predict calls).
class GpModel {
 public:
  // Builds the Gram matrix and factorizes. Throws FactorizationFailure if two
  // observations share a location while noise_variance == 0, or if Cholesky still
  // fails after the jitter ladder (1e-8, then 3 retries at 10x).
  static GpModel fit(std::vector<Observation> obs, const GpHyperparams& h);

  // Same as fit but reuses a caller-built Gram matrix (kernel values only, no noise
  // on the diagonal). gram must be n x n with gram(i,j) = kernel(obs[i], obs[j]).
  static GpModel fit_with_gram(std::vector<Observation> obs, const GpHyperparams& h,
                               const Eigen::Ref<const Eigen::MatrixXd>& gram);

  Prediction predict_one(const Point2& q) const;

  // Batched prediction at arbitrary query points.
  void predict(const std::vector<Point2>& queries, std::vector<double>& mean,
               std::vector<double>& variance) const;

  // Fast path for a fixed query set whose cross-covariances the caller maintains:
  // cross must be n x m with cross(i, q) = kernel(obs[i], queries[q]). Either output
  // may be null when not needed.
  void predict_with_cross(const Eigen::Ref<const Eigen::MatrixXd>& cross,
                          std::vector<double>* mean, std::vector<double>* variance) const;

  const std::vector<Observation>& observations() const { return obs_; }
  const GpHyperparams& hyperparams() const { return h_; }
  std::size_t size() const { return obs_.size(); }

 private:
  GpModel() = default;

  std::vector<Observation> obs_;
  GpHyperparams h_;
  Eigen::MatrixXd L_;      // lower Cholesky factor of K + (noise + jitter) I
  Eigen::VectorXd alpha_;  // (K + (noise + jitter) I)^-1 y
};

}  // namespace gpmap
