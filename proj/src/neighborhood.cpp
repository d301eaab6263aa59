#include "spiraldim/neighborhood.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <unordered_map>

#include "spiraldim/errors.hpp"

namespace spiraldim {

const char* to_string(AreaMethod m) {
  switch (m) {
    case AreaMethod::MonteCarlo: return "MonteCarlo";
    case AreaMethod::PairwiseLens: return "PairwiseLens";
    case AreaMethod::GridRaster: return "GridRaster";
  }
  return "?";
}

AreaMethod parse_area_method(const std::string& s) {
  if (s == "MonteCarlo" || s == "montecarlo" || s == "mc") return AreaMethod::MonteCarlo;
  if (s == "PairwiseLens" || s == "pairwiselens" || s == "lens") return AreaMethod::PairwiseLens;
  if (s == "GridRaster" || s == "gridraster" || s == "raster") return AreaMethod::GridRaster;
  throw DomainError("unknown area method '" + s + "'");
}

PlanarSet planar_set(const DiscreteSpiral& s, bool with_nucleus) {
  PlanarSet out;
  out.points.reserve(s.points.size());
  for (const auto& p : s.points) out.points.push_back({p.x(), p.y()});
  const auto n = s.points.size();
  if (with_nucleus && n >= 2 && s.points[n - 1].r < s.points[n - 2].r)
    out.nucleus = s.points[n - 1].r;
  return out;
}

PlanarSet planar_set(const ContinuousSpiralSample& s, bool with_nucleus) {
  PlanarSet out;
  out.polyline = true;
  out.points.reserve(s.points.size());
  for (const auto& p : s.points) out.points.push_back({p.x(), p.y()});
  if (with_nucleus && !s.points.empty()) out.nucleus = s.points.back().r;
  return out;
}

PlanarSet planar_set(std::vector<Vec2> pts, double nucleus) {
  if (!(nucleus >= 0.0)) throw DomainError("planar_set: negative nucleus");
  return PlanarSet{std::move(pts), false, nucleus};
}

double lens_area(double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::fabs(r1 - r2)) return std::numbers::pi * rmin * rmin;
  const double c1 = std::clamp((d * d + r1 * r1 - r2 * r2) / (2 * d * r1), -1.0, 1.0);
  const double c2 = std::clamp((d * d + r2 * r2 - r1 * r1) / (2 * d * r2), -1.0, 1.0);
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * std::acos(c1) + r2 * r2 * std::acos(c2) -
         0.5 * std::sqrt(std::max(0.0, k));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 53 random bits -> [0, 1); the standard distributions are not specified
// bit-for-bit across library implementations.
inline double unit(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

double norm(Vec2 p) { return std::hypot(p.x, p.y); }

double max_radius(const PlanarSet& s) {
  double m = s.nucleus;
  for (const auto& p : s.points) m = std::max(m, norm(p));
  return m;
}

std::int64_t count_active(const PlanarSet& s, double eps) {
  if (s.nucleus <= 0.0) return std::int64_t(s.points.size());
  std::int64_t n = 0;
  // disks not touching the nucleus disk
  for (const auto& p : s.points)
    if (norm(p) > s.nucleus + 2.0 * eps) ++n;
  return n;
}

EpsAreaSample monte_carlo(const PlanarSet& s, double eps, const AreaOptions& opt,
                          std::uint64_t stream) {
  if (opt.mc_samples < kMinMcSamples)
    throw DomainError("MonteCarlo needs at least 10^4 samples");
  const NeighborIndex index(s.points, 2.0 * eps, s.polyline);
  const double R = max_radius(s) + eps;
  const double nuc = s.nucleus > 0.0 ? s.nucleus + eps : -1.0;
  std::mt19937_64 gen(splitmix64(opt.seed ^ splitmix64(stream + 1)));
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < opt.mc_samples; ++i) {
    const double rr = R * std::sqrt(unit(gen));
    const double th = 2.0 * std::numbers::pi * unit(gen);
    const Vec2 q{rr * std::cos(th), rr * std::sin(th)};
    if (rr <= nuc || index.within(q, eps)) ++hits;
  }
  const double n = double(opt.mc_samples);
  const double f = double(hits) / n;
  const double bound = std::numbers::pi * R * R;
  return {eps, f * bound, bound * std::sqrt(f * (1.0 - f) / n),
          AreaMethod::MonteCarlo, 0};
}

EpsAreaSample pairwise_lens(const PlanarSet& s, double eps) {
  if (s.polyline)
    throw DomainError("PairwiseLens works on point sets, not polylines");
  const double pi = std::numbers::pi;
  const double rho = s.nucleus;
  std::vector<Vec2> active;
  active.reserve(s.points.size());
  for (const auto& p : s.points)
    if (rho <= 0.0 || norm(p) > rho) active.push_back(p);

  double area = 0.0;
  if (rho > 0.0) area += pi * (rho + eps) * (rho + eps);
  for (const auto& p : active) {
    area += pi * eps * eps;
    if (rho > 0.0) area -= lens_area(eps, rho + eps, norm(p));
  }
  const NeighborIndex index(active, 2.0 * eps, false);
  const double lim2 = 4.0 * eps * eps;
  for (std::uint32_t i = 0; i < active.size(); ++i) {
    const auto cx = index.coord(active[i].x), cy = index.coord(active[i].y);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (auto j : index.items(cx + dx, cy + dy)) {
          if (j <= i) continue;
          const double d2 = dist2(active[i], active[j]);
          if (d2 < lim2) area -= lens_area(eps, eps, std::sqrt(d2));
        }
  }
  return {eps, std::max(area, 0.0), 0.0, AreaMethod::PairwiseLens, 0};
}

EpsAreaSample grid_raster(const PlanarSet& s, double eps, int subdiv) {
  if (subdiv < 2) throw DomainError("GridRaster needs raster_subdiv >= 2");
  const double cell = 2.0 * eps;
  const NeighborIndex index(s.points, cell, s.polyline);
  // occupied cells dilated by one: every covered pixel lies in one of them
  std::vector<std::uint64_t> cand;
  cand.reserve(index.cells().size() * 9);
  for (auto k : index.cells()) {
    const auto [ix, iy] = NeighborIndex::unkey(k);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        cand.push_back(NeighborIndex::key(ix + dx, iy + dy));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  const double h = cell / subdiv;
  const double e2 = eps * eps;
  const double nuc = s.nucleus > 0.0 ? s.nucleus + eps : -1.0;
  const double nuc2 = nuc * nuc;
  std::vector<std::uint32_t> local;
  std::int64_t covered = 0;
  for (auto k : cand) {
    const auto [ix, iy] = NeighborIndex::unkey(k);
    local.clear();
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (auto i : index.items(ix + dx, iy + dy)) local.push_back(i);
    if (local.empty()) continue;
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    const double x0 = double(ix) * cell, y0 = double(iy) * cell;
    for (int a = 0; a < subdiv; ++a) {
      const double px = x0 + (a + 0.5) * h;
      for (int b = 0; b < subdiv; ++b) {
        const Vec2 q{px, y0 + (b + 0.5) * h};
        if (nuc > 0.0 && q.x * q.x + q.y * q.y <= nuc2) continue;  // analytic
        for (auto i : local) {
          const bool hit =
              s.polyline
                  ? seg_dist2(q, s.points[i],
                              i + 1 < s.points.size() ? s.points[i + 1]
                                                      : s.points[i]) <= e2
                  : dist2(q, s.points[i]) <= e2;
          if (hit) {
            ++covered;
            break;
          }
        }
      }
    }
  }
  double area = double(covered) * h * h;
  if (nuc > 0.0) area += std::numbers::pi * nuc2;
  return {eps, area, 0.0, AreaMethod::GridRaster, 0};
}

}  // namespace

EpsAreaSample eps_area(const PlanarSet& set, double eps, const AreaOptions& opt,
                       std::uint64_t stream) {
  if (!(eps > 0.0)) throw DomainError("eps_area: eps must be positive");
  if (set.points.empty()) throw DomainError("eps_area: empty point set");
  EpsAreaSample out;
  switch (opt.method) {
    case AreaMethod::MonteCarlo: out = monte_carlo(set, eps, opt, stream); break;
    case AreaMethod::PairwiseLens: out = pairwise_lens(set, eps); break;
    case AreaMethod::GridRaster: out = grid_raster(set, eps, opt.raster_subdiv); break;
  }
  out.n_active = count_active(set, eps);
  return out;
}

EpsAreaSample eps_area(const DiscreteSpiral& s, double eps, AreaMethod method,
                       std::int64_t mc_samples, std::uint64_t seed) {
  AreaOptions opt;
  opt.method = method;
  opt.mc_samples = mc_samples;
  opt.seed = seed;
  return eps_area(planar_set(s), eps, opt);
}

std::vector<double> geometric_ladder(double lo, double hi, int rungs) {
  if (!(lo > 0.0 && lo < hi)) throw DomainError("ladder: need 0 < min < max");
  if (rungs < 2) throw DomainError("ladder: need at least two rungs");
  std::vector<double> v(rungs);
  const double span = std::log(hi / lo);
  for (int i = 0; i < rungs; ++i)
    v[i] = i == 0 ? lo
         : i == rungs - 1 ? hi
         : lo * std::exp(span * double(i) / double(rungs - 1));
  return v;
}

std::vector<EpsAreaSample> eps_ladder(const PlanarSet& set, double eps_min,
                                      double eps_max, int rungs,
                                      const AreaOptions& opt, int threads) {
  if (rungs < 5) throw DomainError("eps_ladder: need at least 5 rungs");
  const auto eps = geometric_ladder(eps_min, eps_max, rungs);
  std::vector<EpsAreaSample> out(rungs);
  const int nt = std::clamp(threads, 1, rungs);
  if (nt == 1) {
    for (int i = 0; i < rungs; ++i) out[i] = eps_area(set, eps[i], opt, std::uint64_t(i));
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errs(rungs);
  auto work = [&] {
    for (int i = next++; i < rungs; i = next++) {
      try {
        out[i] = eps_area(set, eps[i], opt, std::uint64_t(i));
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

BoxCountSample box_count(const PlanarSet& set, double delta) {
  if (!(delta > 0.0)) throw DomainError("box_count: delta must be positive");
  std::vector<std::uint64_t> keys;
  keys.reserve(set.points.size());
  auto cf = [&](double v) {
    const double c = std::floor(v / delta);
    if (!(std::fabs(c) < 2.0e9)) throw NumericError("box_count: grid range");
    return std::int64_t(c);
  };
  for (const auto& p : set.points) keys.push_back(NeighborIndex::key(cf(p.x), cf(p.y)));
  const double rho = set.nucleus;
  if (rho > 0.0) {
    const auto lo = cf(-rho), hi = cf(rho);
    for (auto ix = lo; ix <= hi; ++ix) {
      for (auto iy = lo; iy <= hi; ++iy) {
        // nearest point of the cell to the origin
        const double x0 = ix * delta, y0 = iy * delta;
        const double nx = std::clamp(0.0, x0, x0 + delta);
        const double ny = std::clamp(0.0, y0, y0 + delta);
        if (nx * nx + ny * ny <= rho * rho) keys.push_back(NeighborIndex::key(ix, iy));
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  const auto n = std::unique(keys.begin(), keys.end()) - keys.begin();
  return {delta, std::int64_t(n)};
}

std::vector<BoxCountSample> box_count_ladder(const PlanarSet& set,
                                             double delta_min, double delta_max,
                                             int rungs) {
  std::vector<BoxCountSample> out;
  for (double d : geometric_ladder(delta_min, delta_max, rungs))
    out.push_back(box_count(set, d));
  return out;
}

std::int64_t overlap_count_tail(std::span<const Vec2> pts, double eps) {
  if (!(eps > 0.0)) throw DomainError("overlap_count_tail: eps must be positive");
  const double cell = 2.0 * eps;
  const double lim2 = cell * cell;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
  auto cf = [&](double v) { return std::int64_t(std::floor(v / cell)); };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto cx = cf(pts[i].x), cy = cf(pts[i].y);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find(NeighborIndex::key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (auto j : it->second)
          if (dist2(pts[i], pts[j]) <= lim2) return std::int64_t(i);
      }
    grid[NeighborIndex::key(cx, cy)].push_back(std::uint32_t(i));
  }
  return std::int64_t(pts.size());
}

std::int64_t overlap_count_tail(const DiscreteSpiral& s, double eps) {
  return overlap_count_tail(planar_set(s, false).points, eps);
}

}  // namespace spiraldim
