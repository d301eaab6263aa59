#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace spiraldim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist2(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Squared distance from p to the segment [a, b].
double seg_dist2(Vec2 p, Vec2 a, Vec2 b);

// Static uniform grid over a point set (or the segments of the polyline
// through it), stored as sorted cell keys + offsets. Cell side must be at
// least the query radius so a 3x3 block around the query cell suffices.
class NeighborIndex {
 public:
  NeighborIndex(std::span<const Vec2> pts, double cell, bool segments);

  double cell() const { return cell_; }
  std::int64_t coord(double v) const;
  static std::uint64_t key(std::int64_t ix, std::int64_t iy);
  static std::pair<std::int64_t, std::int64_t> unkey(std::uint64_t k);

  // Items (point or segment indices) registered in cell (ix, iy).
  std::span<const std::uint32_t> items(std::int64_t ix, std::int64_t iy) const;
  // Occupied cell keys, sorted.
  const std::vector<std::uint64_t>& cells() const { return keys_; }

  // True if some point/segment lies within distance eps of q (eps <= cell).
  bool within(Vec2 q, double eps) const;

 private:
  std::span<const Vec2> pts_;
  double cell_;
  bool segments_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> items_;
};

}  // namespace spiraldim
