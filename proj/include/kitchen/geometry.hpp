#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kitchen {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Point2&) const = default;

  double norm() const { return std::hypot(x, y); }
  double dot(Point2 o) const { return x * o.x + y * o.y; }
  double cross(Point2 o) const { return x * o.y - y * o.x; }
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

struct Segment {
  Point2 a;
  Point2 b;
};

// Closest point on segment [a,b] to p.
Point2 closestPointOnSegment(Point2 p, const Segment& s);
double pointSegmentDistance(Point2 p, const Segment& s);

// Direction a counter's front face (or a wall's interior side) points to.
// Angles are k * 90 degrees counter-clockwise from +x.
enum class QuarterTurn { East = 0, North = 1, West = 2, South = 3 };

Point2 direction(QuarterTurn q);
QuarterTurn opposite(QuarterTurn q);
QuarterTurn snapToQuarterTurn(Point2 dir);
double radians(QuarterTurn q);
// Smallest angular difference between two quarter turns, in radians (0, pi/2 or pi).
double angularDifference(QuarterTurn a, QuarterTurn b);
const char* toString(QuarterTurn q);
QuarterTurn quarterTurnFromString(const std::string& s);

struct Box {
  Point2 min;
  Point2 max;

  Point2 center() const { return (min + max) * 0.5; }
  std::array<Segment, 4> edges() const;
};

double pointBoxDistance(Point2 p, const Box& b);
Point2 closestPointOnBox(Point2 p, const Box& b);
double segmentSegmentDistance(const Segment& s, const Segment& t);
// 0 when the segment touches or enters the box.
double segmentBoxDistance(const Segment& s, const Box& b);
// True if the segment enters the open interior of the box.
bool segmentIntersectsBoxInterior(const Segment& s, const Box& b);

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnreachableCounter : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class Room {
 public:
  Room() = default;
  // Vertices are reordered counter-clockwise if given clockwise. Throws
  // GeometryError if the polygon is degenerate or self-intersecting, or an
  // interior wall leaves the boundary.
  Room(std::vector<Point2> boundary, std::vector<Segment> interiorWalls = {},
       bool interiorWallsBlockMotion = false);

  static Room rectangle(double width, double height);
  // width x height rectangle with the (cutWidth x cutHeight) top-right corner removed.
  static Room lShape(double width, double height, double cutWidth, double cutHeight);

  const std::vector<Point2>& boundary() const { return boundary_; }
  const std::vector<Segment>& interiorWalls() const { return interiorWalls_; }
  bool interiorWallsBlockMotion() const { return blockMotion_; }

  std::size_t edgeCount() const { return boundary_.size(); }
  Segment edge(std::size_t i) const;

  // Inside or on the boundary.
  bool contains(Point2 p, double eps = 1e-9) const;
  double boundaryDistance(Point2 p) const;
  double perimeter() const;
  double diameter() const;
  Box bounds() const;

  Room scaled(double factor) const;
  Room withInteriorWalls(std::vector<Segment> walls, bool blockMotion) const;

 private:
  std::vector<Point2> boundary_;
  std::vector<Segment> interiorWalls_;
  bool blockMotion_ = false;
};

enum class CounterKind { Bun, Meat, Tomato, Lettuce, Cheese, Stove, CuttingBoard, Plate, Plain };

const char* toString(CounterKind k);
CounterKind counterKindFromString(const std::string& s);

struct Counter {
  std::string id;
  CounterKind kind = CounterKind::Plain;
  Point2 position;  // footprint center
  QuarterTurn orientation = QuarterTurn::North;  // direction of the front (service) face
  double width = 1.0;  // along the front face
  double depth = 0.6;  // front to back
  double targetWallDistance = 0.0;

  Box footprint() const;
  Point2 frontMidpoint() const;
  Point2 backMidpoint() const;
};

struct Layout {
  Room room;
  std::vector<Counter> counters;

  const Counter* find(const std::string& id) const;
  const Counter* findKind(CounterKind kind) const;
};

struct AgentDisc {
  double radius = 0.3;
};

enum class ViolationKind { OutsideBoundary, Overlap, CrossesInteriorWall, BadFootprint };

struct Violation {
  ViolationKind kind;
  std::vector<std::string> counters;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validateLayout(const Layout& layout);

bool pointClear(const Layout& layout, Point2 p, double radius);
// The disc swept from a to b stays inside the room and clear of counters.
// Implies that samples at any spacing are clear.
bool segmentClear(const Layout& layout, Point2 a, Point2 b, double radius);
// segmentClear with an explicit sample spacing; used by verification oracles.
bool segmentClearSampled(const Layout& layout, Point2 a, Point2 b, double radius, double spacing);

struct WallHit {
  Point2 point;
  QuarterTurn facing;  // quarter turn pointing from the wall into the room
  std::size_t wallIndex = 0;  // boundary edges first, then interior walls
  double distance = 0.0;
};

WallHit nearestWall(const Layout& layout, Point2 p);

struct Pose {
  Point2 position;
  QuarterTurn facing = QuarterTurn::North;
};

Pose serviceConfiguration(const Layout& layout, const Counter& counter, double radius,
                          double standoff = 0.2);

struct Clearance {
  double left = 0.0;
  double right = 0.0;
  std::optional<Point2> leftPoint;
  std::optional<Point2> rightPoint;
};

// Distance to the nearest obstacle in each closed half-plane beside `heading`.
// Interior walls count only if they block motion. Distances are capped at the
// room diameter.
Clearance clearanceLeftRight(const Layout& layout, Point2 p, Point2 heading);

}  // namespace kitchen
