#include "gpmap/gp.hpp"

#include <cmath>
#include <utility>

namespace gpmap {

double kernel(const Point2& a, const Point2& b, const GpHyperparams& h) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double d2 = dx * dx + dy * dy;
  return h.signal_variance * std::exp(-d2 / (2.0 * h.length_scale * h.length_scale));
}

namespace {

constexpr double kBaseJitter = 1e-8;
constexpr int kJitterRetries = 3;

Eigen::MatrixXd build_gram(const std::vector<Observation>& obs, const GpHyperparams& h) {
  const Eigen::Index n = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = h.signal_variance;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = kernel(obs[i].location, obs[j].location, h);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

}  // namespace

GpModel GpModel::fit(std::vector<Observation> obs, const GpHyperparams& h) {
  if (obs.empty()) throw FactorizationFailure("fit requires at least one observation");
  const Eigen::MatrixXd gram = build_gram(obs, h);
  return fit_with_gram(std::move(obs), h, gram);
}

GpModel GpModel::fit_with_gram(std::vector<Observation> obs, const GpHyperparams& h,
                               const Eigen::Ref<const Eigen::MatrixXd>& gram) {
  if (obs.empty()) throw FactorizationFailure("fit requires at least one observation");
  if (!h.valid()) throw FactorizationFailure("invalid hyperparameters");
  const Eigen::Index n = static_cast<Eigen::Index>(obs.size());
  if (gram.rows() != n || gram.cols() != n)
    throw FactorizationFailure("gram matrix size does not match observations");

  // A jittered Cholesky would numerically "succeed" on the singular Gram matrix a
  // duplicate pair produces, so the noiseless case is rejected explicitly.
  if (h.noise_variance == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (obs[i].location.x == obs[j].location.x &&
            obs[i].location.y == obs[j].location.y)
          throw FactorizationFailure(
              "duplicate observation locations with zero noise variance");
  }

  GpModel model;
  model.obs_ = std::move(obs);
  model.h_ = h;

  double jitter = kBaseJitter;
  for (int attempt = 0; attempt <= kJitterRetries; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += h.noise_variance + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      model.L_ = llt.matrixL();
      Eigen::VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) y(i) = model.obs_[static_cast<std::size_t>(i)].value;
      model.alpha_ = llt.solve(y);
      return model;
    }
  }
  throw FactorizationFailure("Cholesky failed after jitter retries");
}

void GpModel::predict_with_cross(const Eigen::Ref<const Eigen::MatrixXd>& cross,
                                 std::vector<double>* mean,
                                 std::vector<double>* variance) const {
  const Eigen::Index m = cross.cols();
  if (mean) {
    mean->resize(static_cast<std::size_t>(m));
    Eigen::Map<Eigen::VectorXd>(mean->data(), m).noalias() = cross.transpose() * alpha_;
  }
  if (variance) {
    variance->resize(static_cast<std::size_t>(m));
    const Eigen::MatrixXd v = L_.triangularView<Eigen::Lower>().solve(cross);
    Eigen::Map<Eigen::VectorXd>(variance->data(), m) =
        (h_.signal_variance - v.colwise().squaredNorm().transpose().array())
            .max(0.0)  // clamp tiny negative round-off
            .matrix();
  }
}

void GpModel::predict(const std::vector<Point2>& queries, std::vector<double>& mean,
                      std::vector<double>& variance) const {
  const Eigen::Index n = static_cast<Eigen::Index>(obs_.size());
  const Eigen::Index m = static_cast<Eigen::Index>(queries.size());
  Eigen::MatrixXd cross(n, m);
  for (Eigen::Index q = 0; q < m; ++q)
    for (Eigen::Index i = 0; i < n; ++i)
      cross(i, q) = kernel(obs_[static_cast<std::size_t>(i)].location,
                           queries[static_cast<std::size_t>(q)], h_);
  predict_with_cross(cross, &mean, &variance);
}

Prediction GpModel::predict_one(const Point2& q) const {
  std::vector<double> mean, variance;
  predict({q}, mean, variance);
  return {mean[0], variance[0]};
}

}  // namespace gpmap
