#include "spiraldim/spatial_hash.hpp"

#include <algorithm>
#include <cmath>

#include "spiraldim/errors.hpp"

namespace spiraldim {

double seg_dist2(Vec2 p, Vec2 a, Vec2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double dx = a.x + t * vx - p.x, dy = a.y + t * vy - p.y;
  return dx * dx + dy * dy;
}

namespace {
constexpr std::int64_t kBias = std::int64_t(1) << 31;
}

std::int64_t NeighborIndex::coord(double v) const {
  const double c = std::floor(v / cell_);
  if (!(std::fabs(c) < double(kBias - 2)))
    throw NumericError("spatial index: coordinate out of grid range");
  return std::int64_t(c);
}

std::uint64_t NeighborIndex::key(std::int64_t ix, std::int64_t iy) {
  return (std::uint64_t(ix + kBias) << 32) | std::uint64_t(iy + kBias);
}

std::pair<std::int64_t, std::int64_t> NeighborIndex::unkey(std::uint64_t k) {
  return {std::int64_t(k >> 32) - kBias,
          std::int64_t(k & 0xffffffffULL) - kBias};
}

NeighborIndex::NeighborIndex(std::span<const Vec2> pts, double cell,
                             bool segments)
    : pts_(pts), cell_(cell), segments_(segments) {
  if (!(cell > 0.0)) throw DomainError("spatial index: cell must be positive");
  if (pts.size() >= 0xffffffffULL) throw DomainError("spatial index: too many points");
  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries;
  if (!segments) {
    entries.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      entries.emplace_back(key(coord(pts[i].x), coord(pts[i].y)),
                           std::uint32_t(i));
  } else {
    // register each segment in every cell its bounding box touches
    const std::size_t nseg = pts.size() > 1 ? pts.size() - 1 : pts.size();
    for (std::size_t i = 0; i < nseg; ++i) {
      const Vec2 a = pts[i], b = pts.size() > 1 ? pts[i + 1] : pts[i];
      const auto x0 = coord(std::min(a.x, b.x)), x1 = coord(std::max(a.x, b.x));
      const auto y0 = coord(std::min(a.y, b.y)), y1 = coord(std::max(a.y, b.y));
      for (auto ix = x0; ix <= x1; ++ix)
        for (auto iy = y0; iy <= y1; ++iy)
          entries.emplace_back(key(ix, iy), std::uint32_t(i));
    }
  }
  std::sort(entries.begin(), entries.end());
  items_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == 0 || entries[i].first != entries[i - 1].first) {
      keys_.push_back(entries[i].first);
      offsets_.push_back(std::uint32_t(items_.size()));
    }
    items_.push_back(entries[i].second);
  }
  offsets_.push_back(std::uint32_t(items_.size()));
}

std::span<const std::uint32_t> NeighborIndex::items(std::int64_t ix,
                                                    std::int64_t iy) const {
  const auto k = key(ix, iy);
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
  if (it == keys_.end() || *it != k) return {};
  const auto j = std::size_t(it - keys_.begin());
  return {items_.data() + offsets_[j], items_.data() + offsets_[j + 1]};
}

bool NeighborIndex::within(Vec2 q, double eps) const {
  const double e2 = eps * eps;
  const auto cx = coord(q.x), cy = coord(q.y);
  for (std::int64_t dx = -1; dx <= 1; ++dx) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (auto i : items(cx + dx, cy + dy)) {
        if (!segments_) {
          if (dist2(q, pts_[i]) <= e2) return true;
        } else {
          const Vec2 a = pts_[i];
          const Vec2 b = i + 1 < pts_.size() ? pts_[i + 1] : pts_[i];
          if (seg_dist2(q, a, b) <= e2) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace spiraldim
