#include "gpmap/field.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include <json.hpp>

#include "gpmap/io.hpp"

namespace gpmap {

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::uniform: return "uniform";
    case FieldKind::sloped: return "sloped";
    case FieldKind::gaussian: return "gaussian";
    case FieldKind::hybrid: return "hybrid";
  }
  return "?";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "uniform") return FieldKind::uniform;
  if (s == "sloped") return FieldKind::sloped;
  if (s == "gaussian") return FieldKind::gaussian;
  if (s == "hybrid") return FieldKind::hybrid;
  throw std::invalid_argument("unknown field kind: " + s);
}

namespace {

// Affine map onto [0,1]; the extremes land on 0 and 1 exactly. All-equal input is left
// at zero (only reachable through the degenerate zero-cluster path).
void rescale_unit(std::vector<double>& v) {
  const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
  const double mn = *mn_it, mx = *mx_it;
  if (mx == mn) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  const double range = mx - mn;
  for (double& x : v) x = (x - mn) / range;
}

std::vector<double> sloped_values(const GridSpec& spec, double theta) {
  std::vector<double> v;
  v.reserve(spec.node_count());
  const double cx = std::cos(theta), cy = std::sin(theta);
  for (int iy = 0; iy < spec.resolution; ++iy)
    for (int ix = 0; ix < spec.resolution; ++ix) {
      const Point2 p = spec.node(ix, iy);
      v.push_back(cx * p.x + cy * p.y);
    }
  rescale_unit(v);
  return v;
}

std::vector<double> cluster_values(const GridSpec& spec,
                                   const std::vector<GaussianCluster>& clusters) {
  std::vector<double> v(spec.node_count(), 0.0);
  for (const GaussianCluster& c : clusters) {
    const double inv = 1.0 / (2.0 * c.radius * c.radius);
    std::size_t idx = 0;
    for (int iy = 0; iy < spec.resolution; ++iy)
      for (int ix = 0; ix < spec.resolution; ++ix, ++idx) {
        const Point2 p = spec.node(ix, iy);
        const double dx = p.x - c.center.x, dy = p.y - c.center.y;
        v[idx] += c.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
      }
  }
  rescale_unit(v);
  return v;
}

}  // namespace

std::vector<GaussianCluster> draw_clusters(const GridSpec& spec, int n_clusters, Rng& rng) {
  std::vector<GaussianCluster> clusters;
  clusters.reserve(static_cast<std::size_t>(std::max(0, n_clusters)));
  const double radius_hi = std::max(1.0, spec.side / 10.0);
  for (int i = 0; i < n_clusters; ++i) {
    GaussianCluster c;
    c.center.x = rng.uniform(0.0, spec.side);
    c.center.y = rng.uniform(0.0, spec.side);
    c.radius = rng.uniform(1.0, radius_hi);
    c.amplitude = rng.uniform(0.3, 1.0);
    clusters.push_back(c);
  }
  return clusters;
}

GroundTruthField generate_uniform(const GridSpec& spec, double level) {
  GroundTruthField f{spec, FieldKind::uniform, 0,
                     std::vector<double>(spec.node_count(), level)};
  return f;
}

GroundTruthField generate_sloped(const GridSpec& spec, std::uint64_t seed,
                                 std::optional<double> direction_override) {
  Rng rng(seed);
  double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  if (direction_override) theta = *direction_override;
  return {spec, FieldKind::sloped, seed, sloped_values(spec, theta)};
}

GroundTruthField generate_gaussian(const GridSpec& spec, int n_clusters,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const auto clusters = draw_clusters(spec, n_clusters, rng);
  return {spec, FieldKind::gaussian, seed, cluster_values(spec, clusters)};
}

GroundTruthField generate_hybrid(const GridSpec& spec, int n_clusters, std::uint64_t seed,
                                 double cluster_amplitude_scale) {
  Rng rng(seed);
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  auto clusters = draw_clusters(spec, n_clusters, rng);
  for (auto& c : clusters) c.amplitude *= cluster_amplitude_scale;

  const std::vector<double> slope = sloped_values(spec, theta);
  const std::vector<double> bumps = cluster_values(spec, clusters);
  std::vector<double> v(spec.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (slope[i] + bumps[i]) / 2.0;
  rescale_unit(v);
  return {spec, FieldKind::hybrid, seed, std::move(v)};
}

double sample_truth(const GroundTruthField& field, const Point2& p) {
  const GridSpec& spec = field.spec;
  if (!(p.x >= 0.0 && p.x <= spec.side && p.y >= 0.0 && p.y <= spec.side))
    throw OutOfBounds("query (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") outside [0, " + std::to_string(spec.side) + "]^2");

  // Fractional node coordinates, with snapping so node queries hit stored values
  // exactly even when side/spacing round-off puts t a few ulps off an integer.
  const auto axis = [&](double coord, int& i0, double& frac) {
    const double t = coord / spec.spacing();
    i0 = static_cast<int>(std::floor(t));
    frac = t - i0;
    if (frac < 1e-9) {
      frac = 0.0;
    } else if (frac > 1.0 - 1e-9) {
      ++i0;
      frac = 0.0;
    }
    i0 = std::clamp(i0, 0, spec.resolution - 1);
    if (frac > 0.0 && i0 >= spec.resolution - 1) {  // clamp keeps the stencil in range
      i0 = spec.resolution - 2;
      frac = 1.0;
    }
  };

  int ix, iy;
  double fx, fy;
  axis(p.x, ix, fx);
  axis(p.y, iy, fy);

  const int ix1 = fx > 0.0 ? ix + 1 : ix;
  const int iy1 = fy > 0.0 ? iy + 1 : iy;
  const double v00 = field.value_at(ix, iy);
  const double v10 = field.value_at(ix1, iy);
  const double v01 = field.value_at(ix, iy1);
  const double v11 = field.value_at(ix1, iy1);
  const double top = v00 + fx * (v10 - v00);
  const double bot = v01 + fx * (v11 - v01);
  return top + fy * (bot - top);
}

void save_field(const GroundTruthField& field, const std::string& json_path,
                const std::string& csv_path) {
  nlohmann::json header;
  header["kind"] = to_string(field.kind);
  header["seed"] = field.seed;
  header["side"] = field.spec.side;
  header["resolution"] = field.spec.resolution;
  header["grid_csv"] = std::filesystem::path(csv_path).filename().string();
  atomic_write_file(csv_path, grid_to_csv(field.values, field.spec.resolution));
  atomic_write_file(json_path, header.dump(2) + "\n");
}

GroundTruthField load_field(const std::string& json_path) {
  const nlohmann::json header = nlohmann::json::parse(read_file(json_path));
  GroundTruthField field;
  field.kind = field_kind_from_string(header.at("kind").get<std::string>());
  field.seed = header.at("seed").get<std::uint64_t>();
  field.spec.side = header.at("side").get<double>();
  field.spec.resolution = header.at("resolution").get<int>();
  const auto csv_name = header.at("grid_csv").get<std::string>();
  const auto csv_path = std::filesystem::path(json_path).parent_path() / csv_name;
  int resolution = 0;
  field.values = grid_from_csv(read_file(csv_path.string()), &resolution);
  if (resolution != field.spec.resolution)
    throw std::runtime_error("grid csv resolution mismatch in " + json_path);
  return field;
}

}  // namespace gpmap
