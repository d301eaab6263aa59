#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spiraldim/orbits.hpp"
#include "spiraldim/spatial_hash.hpp"

namespace spiraldim {

enum class AreaMethod { MonteCarlo, PairwiseLens, GridRaster };
const char* to_string(AreaMethod m);
AreaMethod parse_area_method(const std::string& s);

// Point set whose eps-neighbourhood is measured. With polyline = true the
// set is the broken line through the points. nucleus > 0 adds the disk of
// radius nucleus + eps around the origin (the unreached orbit tail).
struct PlanarSet {
  std::vector<Vec2> points;
  bool polyline = false;
  double nucleus = 0.0;
};

// Nucleus radius is the last radius, used only when the orbit is still
// contracting at the end; otherwise there is no unreached tail to model.
PlanarSet planar_set(const DiscreteSpiral& s, bool with_nucleus = true);
// Polyline through the samples; nucleus at r_end.
PlanarSet planar_set(const ContinuousSpiralSample& s, bool with_nucleus = true);
PlanarSet planar_set(std::vector<Vec2> pts, double nucleus = 0.0);

struct EpsAreaSample {
  double eps = 0.0;
  double area = 0.0;
  double std_error = 0.0;  // 0 for deterministic methods
  AreaMethod method = AreaMethod::MonteCarlo;
  std::int64_t n_active = 0;
};

struct BoxCountSample {
  double delta = 0.0;
  std::int64_t count = 0;
};

inline constexpr std::int64_t kDefaultMcSamples = 200000;
inline constexpr std::int64_t kMinMcSamples = 10000;
inline constexpr int kDefaultRasterSubdiv = 32;

struct AreaOptions {
  AreaMethod method = AreaMethod::MonteCarlo;
  std::int64_t mc_samples = kDefaultMcSamples;
  std::uint64_t seed = 0;
  int raster_subdiv = kDefaultRasterSubdiv;  // pixels per 2*eps cell side
};

// Area of the intersection of two disks with radii r1, r2 at distance d.
double lens_area(double r1, double r2, double d);

// stream selects an independent random substream (the ladder passes the
// rung index).
EpsAreaSample eps_area(const PlanarSet& set, double eps, const AreaOptions& opt,
                       std::uint64_t stream = 0);
EpsAreaSample eps_area(const DiscreteSpiral& s, double eps, AreaMethod method,
                       std::int64_t mc_samples, std::uint64_t seed);

std::vector<double> geometric_ladder(double lo, double hi, int rungs);

std::vector<EpsAreaSample> eps_ladder(const PlanarSet& set, double eps_min,
                                      double eps_max, int rungs,
                                      const AreaOptions& opt, int threads = 1);

BoxCountSample box_count(const PlanarSet& set, double delta);
std::vector<BoxCountSample> box_count_ladder(const PlanarSet& set,
                                             double delta_min,
                                             double delta_max, int rungs);

// Largest m such that the first m points are pairwise more than 2 eps apart.
std::int64_t overlap_count_tail(std::span<const Vec2> pts, double eps);
std::int64_t overlap_count_tail(const DiscreteSpiral& s, double eps);

}  // namespace spiraldim
