#include "kitchen/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace kitchen {

namespace {

constexpr double kEps = 1e-9;

double orient(Point2 a, Point2 b, Point2 c) { return (b - a).cross(c - a); }

bool onSegment(Point2 p, const Segment& s, double eps = kEps) {
  return pointSegmentDistance(p, s) <= eps;
}

// Segments share at least one point.
bool segmentsTouch(const Segment& s, const Segment& t) {
  const double d1 = orient(s.a, s.b, t.a);
  const double d2 = orient(s.a, s.b, t.b);
  const double d3 = orient(t.a, t.b, s.a);
  const double d4 = orient(t.a, t.b, s.b);
  if (((d1 > kEps && d2 < -kEps) || (d1 < -kEps && d2 > kEps)) &&
      ((d3 > kEps && d4 < -kEps) || (d3 < -kEps && d4 > kEps))) {
    return true;
  }
  return onSegment(t.a, s) || onSegment(t.b, s) || onSegment(s.a, t) || onSegment(s.b, t);
}

// Proper crossing: interiors intersect at a single point.
bool segmentsCross(const Segment& s, const Segment& t) {
  const double d1 = orient(s.a, s.b, t.a);
  const double d2 = orient(s.a, s.b, t.b);
  const double d3 = orient(t.a, t.b, s.a);
  const double d4 = orient(t.a, t.b, s.b);
  return ((d1 > kEps && d2 < -kEps) || (d1 < -kEps && d2 > kEps)) &&
         ((d3 > kEps && d4 < -kEps) || (d3 < -kEps && d4 > kEps));
}

double signedArea(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    a += poly[i].cross(poly[(i + 1) % poly.size()]);
  }
  return 0.5 * a;
}

// Part of segment s where (x - p) . n has the requested sign (closed half-plane).
std::optional<Segment> clipToHalfPlane(const Segment& s, Point2 p, Point2 n, bool positive) {
  double sa = (s.a - p).dot(n);
  double sb = (s.b - p).dot(n);
  if (!positive) {
    sa = -sa;
    sb = -sb;
  }
  if (sa >= 0.0 && sb >= 0.0) return s;
  if (sa < 0.0 && sb < 0.0) return std::nullopt;
  const double t = sa / (sa - sb);
  const Point2 cut = s.a + (s.b - s.a) * t;
  if (sa >= 0.0) return Segment{s.a, cut};
  return Segment{cut, s.b};
}

}  // namespace

Point2 closestPointOnSegment(Point2 p, const Segment& s) {
  const Point2 d = s.b - s.a;
  const double len2 = d.dot(d);
  if (len2 == 0.0) return s.a;
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return s.a + d * t;
}

double pointSegmentDistance(Point2 p, const Segment& s) {
  return distance(p, closestPointOnSegment(p, s));
}

Point2 direction(QuarterTurn q) {
  switch (q) {
    case QuarterTurn::East: return {1.0, 0.0};
    case QuarterTurn::North: return {0.0, 1.0};
    case QuarterTurn::West: return {-1.0, 0.0};
    case QuarterTurn::South: return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

QuarterTurn opposite(QuarterTurn q) {
  return static_cast<QuarterTurn>((static_cast<int>(q) + 2) % 4);
}

QuarterTurn snapToQuarterTurn(Point2 dir) {
  const double angle = std::atan2(dir.y, dir.x);
  int k = static_cast<int>(std::lround(angle / (std::numbers::pi / 2.0)));
  k = ((k % 4) + 4) % 4;
  return static_cast<QuarterTurn>(k);
}

double radians(QuarterTurn q) { return static_cast<int>(q) * std::numbers::pi / 2.0; }

double angularDifference(QuarterTurn a, QuarterTurn b) {
  const int d = std::abs(static_cast<int>(a) - static_cast<int>(b)) % 4;
  return std::min(d, 4 - d) * std::numbers::pi / 2.0;
}

const char* toString(QuarterTurn q) {
  switch (q) {
    case QuarterTurn::East: return "E";
    case QuarterTurn::North: return "N";
    case QuarterTurn::West: return "W";
    case QuarterTurn::South: return "S";
  }
  return "?";
}

QuarterTurn quarterTurnFromString(const std::string& s) {
  if (s == "E" || s == "0") return QuarterTurn::East;
  if (s == "N" || s == "90") return QuarterTurn::North;
  if (s == "W" || s == "180") return QuarterTurn::West;
  if (s == "S" || s == "270") return QuarterTurn::South;
  throw std::invalid_argument("unknown orientation '" + s + "'");
}

std::array<Segment, 4> Box::edges() const {
  const Point2 a = min, b{max.x, min.y}, c = max, d{min.x, max.y};
  return {Segment{a, b}, Segment{b, c}, Segment{c, d}, Segment{d, a}};
}

Point2 closestPointOnBox(Point2 p, const Box& b) {
  return {std::clamp(p.x, b.min.x, b.max.x), std::clamp(p.y, b.min.y, b.max.y)};
}

double pointBoxDistance(Point2 p, const Box& b) { return distance(p, closestPointOnBox(p, b)); }

double segmentSegmentDistance(const Segment& s, const Segment& t) {
  if (segmentsTouch(s, t)) return 0.0;
  return std::min({pointSegmentDistance(s.a, t), pointSegmentDistance(s.b, t),
                   pointSegmentDistance(t.a, s), pointSegmentDistance(t.b, s)});
}

double segmentBoxDistance(const Segment& s, const Box& b) {
  if (pointBoxDistance(s.a, b) == 0.0 || pointBoxDistance(s.b, b) == 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const Segment& e : b.edges()) best = std::min(best, segmentSegmentDistance(s, e));
  return best;
}

bool segmentIntersectsBoxInterior(const Segment& s, const Box& b) {
  // Liang-Barsky against the box shrunk by eps so that touching is not overlap.
  const double lo[2] = {b.min.x + kEps, b.min.y + kEps};
  const double hi[2] = {b.max.x - kEps, b.max.y - kEps};
  if (lo[0] >= hi[0] || lo[1] >= hi[1]) return false;
  const double p0[2] = {s.a.x, s.a.y};
  const double d[2] = {s.b.x - s.a.x, s.b.y - s.a.y};
  double t0 = 0.0, t1 = 1.0;
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (p0[axis] <= lo[axis] || p0[axis] >= hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - p0[axis]) / d[axis];
    double tb = (hi[axis] - p0[axis]) / d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return t0 < t1 || (t0 == t1 && t0 > 0.0 && t0 < 1.0);
}

// ---------------------------------------------------------------------------

Room::Room(std::vector<Point2> boundary, std::vector<Segment> interiorWalls,
           bool interiorWallsBlockMotion)
    : boundary_(std::move(boundary)),
      interiorWalls_(std::move(interiorWalls)),
      blockMotion_(interiorWallsBlockMotion) {
  if (boundary_.size() < 3) throw GeometryError("room boundary needs at least 3 vertices");
  for (const Point2& v : boundary_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw GeometryError("room boundary has a non-finite vertex");
    }
  }
  const double area = signedArea(boundary_);
  if (std::abs(area) < kEps) throw GeometryError("room boundary has zero area");
  if (area < 0.0) std::reverse(boundary_.begin(), boundary_.end());

  const std::size_t n = boundary_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(boundary_[i], boundary_[(i + 1) % n]) < kEps) {
      throw GeometryError("room boundary has a repeated vertex");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segmentsTouch(edge(i), edge(j))) {
        throw GeometryError("room boundary is self-intersecting (edges " + std::to_string(i) +
                            " and " + std::to_string(j) + ")");
      }
    }
  }
  for (const Segment& w : interiorWalls_) {
    if (!contains(w.a) || !contains(w.b)) throw GeometryError("interior wall leaves the room");
    for (std::size_t i = 0; i < n; ++i) {
      if (segmentsCross(w, edge(i))) throw GeometryError("interior wall crosses the boundary");
    }
  }
}

Room Room::rectangle(double width, double height) {
  return Room({{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}});
}

Room Room::lShape(double width, double height, double cutWidth, double cutHeight) {
  if (cutWidth <= 0.0 || cutHeight <= 0.0 || cutWidth >= width || cutHeight >= height) {
    throw GeometryError("L-shape cutout must be strictly smaller than the rectangle");
  }
  return Room({{0.0, 0.0},
               {width, 0.0},
               {width, height - cutHeight},
               {width - cutWidth, height - cutHeight},
               {width - cutWidth, height},
               {0.0, height}});
}

Segment Room::edge(std::size_t i) const {
  return {boundary_[i], boundary_[(i + 1) % boundary_.size()]};
}

bool Room::contains(Point2 p, double eps) const {
  if (boundaryDistance(p) <= eps) return true;
  bool inside = false;
  const std::size_t n = boundary_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = boundary_[i], b = boundary_[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double Room::boundaryDistance(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    best = std::min(best, pointSegmentDistance(p, edge(i)));
  }
  return best;
}

double Room::perimeter() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    const Segment e = edge(i);
    sum += distance(e.a, e.b);
  }
  return sum;
}

double Room::diameter() const {
  double best = 0.0;
  for (const Point2& a : boundary_) {
    for (const Point2& b : boundary_) best = std::max(best, distance(a, b));
  }
  return best;
}

Box Room::bounds() const {
  Box b{boundary_.front(), boundary_.front()};
  for (const Point2& v : boundary_) {
    b.min = {std::min(b.min.x, v.x), std::min(b.min.y, v.y)};
    b.max = {std::max(b.max.x, v.x), std::max(b.max.y, v.y)};
  }
  return b;
}

Room Room::scaled(double factor) const {
  std::vector<Point2> verts;
  for (const Point2& v : boundary_) verts.push_back(v * factor);
  std::vector<Segment> walls;
  for (const Segment& w : interiorWalls_) walls.push_back({w.a * factor, w.b * factor});
  return Room(std::move(verts), std::move(walls), blockMotion_);
}

Room Room::withInteriorWalls(std::vector<Segment> walls, bool blockMotion) const {
  return Room(boundary_, std::move(walls), blockMotion);
}

// ---------------------------------------------------------------------------

const char* toString(CounterKind k) {
  switch (k) {
    case CounterKind::Bun: return "Bun";
    case CounterKind::Meat: return "Meat";
    case CounterKind::Tomato: return "Tomato";
    case CounterKind::Lettuce: return "Lettuce";
    case CounterKind::Cheese: return "Cheese";
    case CounterKind::Stove: return "Stove";
    case CounterKind::CuttingBoard: return "CuttingBoard";
    case CounterKind::Plate: return "Plate";
    case CounterKind::Plain: return "Plain";
  }
  return "?";
}

CounterKind counterKindFromString(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(CounterKind::Plain); ++i) {
    const auto k = static_cast<CounterKind>(i);
    if (s == toString(k)) return k;
  }
  throw std::invalid_argument("unknown counter kind '" + s + "'");
}

Box Counter::footprint() const {
  const bool frontAlongX =
      orientation == QuarterTurn::East || orientation == QuarterTurn::West;
  const double hx = (frontAlongX ? depth : width) / 2.0;
  const double hy = (frontAlongX ? width : depth) / 2.0;
  return {{position.x - hx, position.y - hy}, {position.x + hx, position.y + hy}};
}

Point2 Counter::frontMidpoint() const { return position + direction(orientation) * (depth / 2.0); }

Point2 Counter::backMidpoint() const { return position - direction(orientation) * (depth / 2.0); }

const Counter* Layout::find(const std::string& id) const {
  for (const Counter& c : counters) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const Counter* Layout::findKind(CounterKind kind) const {
  for (const Counter& c : counters) {
    if (c.kind == kind) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------

std::vector<Violation> validateLayout(const Layout& layout) {
  std::vector<Violation> out;
  const Room& room = layout.room;
  const auto& cs = layout.counters;

  for (const Counter& c : cs) {
    if (!(c.width > 0.0) || !(c.depth > 0.0)) {
      out.push_back({ViolationKind::BadFootprint, {c.id}, "footprint dimensions must be positive"});
      continue;
    }
    const Box fp = c.footprint();
    const Point2 corners[4] = {fp.min, {fp.max.x, fp.min.y}, fp.max, {fp.min.x, fp.max.y}};
    bool inside = std::all_of(std::begin(corners), std::end(corners),
                              [&](Point2 p) { return room.contains(p); });
    for (std::size_t i = 0; inside && i < room.edgeCount(); ++i) {
      if (segmentIntersectsBoxInterior(room.edge(i), fp)) inside = false;
    }
    if (!inside) {
      out.push_back({ViolationKind::OutsideBoundary, {c.id}, "footprint leaves the room boundary"});
    }
    for (const Segment& w : room.interiorWalls()) {
      if (segmentIntersectsBoxInterior(w, fp)) {
        out.push_back({ViolationKind::CrossesInteriorWall, {c.id}, "footprint crosses an interior wall"});
        break;
      }
    }
  }

  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!(cs[i].width > 0.0) || !(cs[i].depth > 0.0)) continue;
    const Box a = cs[i].footprint();
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (!(cs[j].width > 0.0) || !(cs[j].depth > 0.0)) continue;
      const Box b = cs[j].footprint();
      const double ox = std::min(a.max.x, b.max.x) - std::max(a.min.x, b.min.x);
      const double oy = std::min(a.max.y, b.max.y) - std::max(a.min.y, b.min.y);
      if (ox > kEps && oy > kEps) {
        out.push_back({ViolationKind::Overlap, {cs[i].id, cs[j].id}, "footprints overlap"});
      }
    }
  }
  return out;
}

bool pointClear(const Layout& layout, Point2 p, double radius) {
  const Room& room = layout.room;
  if (!room.contains(p, 0.0) || room.boundaryDistance(p) < radius) return false;
  for (const Counter& c : layout.counters) {
    if (pointBoxDistance(p, c.footprint()) < radius) return false;
  }
  if (room.interiorWallsBlockMotion()) {
    for (const Segment& w : room.interiorWalls()) {
      if (pointSegmentDistance(p, w) < radius) return false;
    }
  }
  return true;
}

bool segmentClearSampled(const Layout& layout, Point2 a, Point2 b, double radius, double spacing) {
  const double len = distance(a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  for (int i = 0; i <= n; ++i) {
    if (!pointClear(layout, a + (b - a) * (static_cast<double>(i) / n), radius)) return false;
  }
  return true;
}

bool segmentClear(const Layout& layout, Point2 a, Point2 b, double radius) {
  // Exact swept-disc test. With a inside the room and every obstacle at least
  // radius away from the segment, every sample of the segment is clear too.
  if (!pointClear(layout, a, radius)) return false;
  const Segment ab{a, b};
  const Box reach{{std::min(a.x, b.x) - radius, std::min(a.y, b.y) - radius},
                  {std::max(a.x, b.x) + radius, std::max(a.y, b.y) + radius}};
  auto near = [&](const Box& o) {
    return o.min.x <= reach.max.x && o.max.x >= reach.min.x && o.min.y <= reach.max.y &&
           o.max.y >= reach.min.y;
  };
  auto bounds = [](const Segment& s) {
    return Box{{std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)},
               {std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)}};
  };
  const Room& room = layout.room;
  for (std::size_t i = 0; i < room.edgeCount(); ++i) {
    const Segment e = room.edge(i);
    if (near(bounds(e)) && segmentSegmentDistance(ab, e) < radius) return false;
  }
  for (const Counter& c : layout.counters) {
    const Box f = c.footprint();
    if (near(f) && segmentBoxDistance(ab, f) < radius) return false;
  }
  if (room.interiorWallsBlockMotion()) {
    for (const Segment& w : room.interiorWalls()) {
      if (near(bounds(w)) && segmentSegmentDistance(ab, w) < radius) return false;
    }
  }
  return true;
}

WallHit nearestWall(const Layout& layout, Point2 p) {
  const Room& room = layout.room;
  if (!room.contains(p)) throw GeometryError("nearest-wall query point lies outside the room");

  WallHit best;
  best.distance = std::numeric_limits<double>::infinity();
  const std::size_t n = room.edgeCount();
  for (std::size_t i = 0; i < n; ++i) {
    const Segment e = room.edge(i);
    const Point2 cp = closestPointOnSegment(p, e);
    const double d = distance(p, cp);
    if (d < best.distance - 1e-12) {
      const Point2 along = e.b - e.a;
      best = {cp, snapToQuarterTurn({-along.y, along.x}), i, d};
    }
  }
  const auto& walls = room.interiorWalls();
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const Point2 cp = closestPointOnSegment(p, walls[i]);
    const double d = distance(p, cp);
    if (d < best.distance - 1e-12) {
      Point2 normal = p - cp;
      if (normal.norm() < kEps) {
        const Point2 along = walls[i].b - walls[i].a;
        normal = {-along.y, along.x};
      }
      best = {cp, snapToQuarterTurn(normal), n + i, d};
    }
  }
  return best;
}

Pose serviceConfiguration(const Layout& layout, const Counter& counter, double radius,
                          double standoff) {
  if (layout.find(counter.id) == nullptr) {
    throw GeometryError("counter '" + counter.id + "' is not part of the layout");
  }
  const Point2 out = direction(counter.orientation);
  const Point2 p = counter.frontMidpoint() + out * (radius + standoff);
  if (!pointClear(layout, p, radius)) {
    throw UnreachableCounter("counter '" + counter.id + "' is unreachable");
  }
  return {p, opposite(counter.orientation)};
}

Clearance clearanceLeftRight(const Layout& layout, Point2 p, Point2 heading) {
  const double len = heading.norm();
  if (len < kEps) throw GeometryError("clearance query needs a non-zero heading");
  const Point2 h = heading * (1.0 / len);
  const Point2 leftNormal{-h.y, h.x};
  const double cap = layout.room.diameter();

  Clearance out{cap, cap, std::nullopt, std::nullopt};
  auto consider = [&](const Segment& s) {
    if (auto l = clipToHalfPlane(s, p, leftNormal, true)) {
      const Point2 cp = closestPointOnSegment(p, *l);
      const double d = distance(p, cp);
      if (d < out.left) {
        out.left = d;
        out.leftPoint = cp;
      }
    }
    if (auto r = clipToHalfPlane(s, p, leftNormal, false)) {
      const Point2 cp = closestPointOnSegment(p, *r);
      const double d = distance(p, cp);
      if (d < out.right) {
        out.right = d;
        out.rightPoint = cp;
      }
    }
  };

  const Room& room = layout.room;
  for (std::size_t i = 0; i < room.edgeCount(); ++i) consider(room.edge(i));
  for (const Counter& c : layout.counters) {
    for (const Segment& e : c.footprint().edges()) consider(e);
  }
  if (room.interiorWallsBlockMotion()) {
    for (const Segment& w : room.interiorWalls()) consider(w);
  }
  return out;
}

}  // namespace kitchen
