#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpmap/geometry.hpp"
#include "gpmap/rng.hpp"

namespace gpmap {

struct OutOfBounds : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FieldKind { uniform, sloped, gaussian, hybrid };

const char* to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& s);

struct GaussianCluster {
  Point2 center;
  double radius = 1.0;  // the Gaussian's standard deviation
  double amplitude = 1.0;
};

struct GroundTruthField {
  GridSpec spec;
  FieldKind kind = FieldKind::uniform;
  std::uint64_t seed = 0;
  std::vector<double> values;  // row-major, size = resolution^2

  double value_at(int ix, int iy) const { return values[spec.index(ix, iy)]; }
};

// Constant field at the given level (level in [0,1]); exempt from min/max rescaling.
GroundTruthField generate_uniform(const GridSpec& spec, double level);

// Affine ramp along a seeded random direction theta ~ U[0, 2pi), rescaled to span
// [0,1] exactly. direction_override (radians) exists for tests that need a known axis.
GroundTruthField generate_sloped(const GridSpec& spec, std::uint64_t seed,
                                 std::optional<double> direction_override = std::nullopt);

// Sum of n isotropic Gaussian bumps over a zero base, rescaled to [0,1]. Per cluster
// the stream draws, in order: center.x, center.y ~ U(0, side); radius ~ U(1, side/10)
// (upper bound clamped to at least 1 so small domains stay valid); amplitude ~ U(0.3, 1).
GroundTruthField generate_gaussian(const GridSpec& spec, int n_clusters, std::uint64_t seed);

// Equal-weight mix of a sloped component and a cluster component, rescaled to [0,1].
// The stream draws theta first, then the clusters, so n_clusters = 0 (or a zero
// amplitude_scale, the test hook) reduces bit-exactly to generate_sloped(spec, seed).
GroundTruthField generate_hybrid(const GridSpec& spec, int n_clusters, std::uint64_t seed,
                                 double cluster_amplitude_scale = 1.0);

// Cluster parameter draws shared by generate_gaussian / generate_hybrid.
std::vector<GaussianCluster> draw_clusters(const GridSpec& spec, int n_clusters, Rng& rng);

// Bilinear interpolation of the grid at p; exact node queries return the stored value.
// Throws OutOfBounds outside [0, side]^2.
double sample_truth(const GroundTruthField& field, const Point2& p);

// Self-describing persistence: a JSON header (kind, seed, spec) next to a flat CSV
// grid. Round-trips values exactly.
void save_field(const GroundTruthField& field, const std::string& json_path,
                const std::string& csv_path);
GroundTruthField load_field(const std::string& json_path);

}  // namespace gpmap
