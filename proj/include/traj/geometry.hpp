#ifndef TRAJ_GEOMETRY_HPP
#define TRAJ_GEOMETRY_HPP

#include "traj/error.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace traj {

/// Planar point in meters (easting, northing). Coordinates must be finite.
struct GeoPoint {
    double x = 0.0;
    double y = 0.0;

    GeoPoint() = default;
    GeoPoint(double x_, double y_);

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Open vertex chain, >= 2 vertices.
struct Polyline {
    std::vector<GeoPoint> vertices;

    Polyline() = default;
    explicit Polyline(std::vector<GeoPoint> vs);

    friend bool operator==(const Polyline&, const Polyline&) = default;
};

/// Simple ring, implicitly closed (last vertex connects back to the first).
/// >= 3 vertices, no two consecutive vertices equal, no self-intersection.
struct Polygon {
    std::vector<GeoPoint> ring;

    Polygon() = default;
    explicit Polygon(std::vector<GeoPoint> r);

    friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Opaque spatial reference tag. Never interpreted, only carried.
struct SpatialReference {
    std::string name = "local-planar-m";

    friend bool operator==(const SpatialReference&, const SpatialReference&) = default;
};

/// Opaque time reference tag.
struct TimeReference {
    std::string name = "utc-epoch-s";

    friend bool operator==(const TimeReference&, const TimeReference&) = default;
};

/// Polymorphic geometry: point, line or area, tagged with its reference.
class SpatialObject {
public:
    enum class Kind { Point, Line, Area };

    SpatialObject() : shape_(GeoPoint{}) {}

    static SpatialObject point(GeoPoint p, SpatialReference crs = {});
    static SpatialObject line(Polyline l, SpatialReference crs = {});
    static SpatialObject area(Polygon a, SpatialReference crs = {});

    Kind kind() const { return static_cast<Kind>(shape_.index()); }
    bool is_point() const { return kind() == Kind::Point; }
    bool is_line() const { return kind() == Kind::Line; }
    bool is_area() const { return kind() == Kind::Area; }

    const GeoPoint& as_point() const;
    const Polyline& as_line() const;
    const Polygon& as_area() const;

    const SpatialReference& crs() const { return crs_; }

    /// Single point standing in for the whole geometry: the point itself,
    /// or the arithmetic mean of the vertices for lines and areas.
    GeoPoint representative_point() const;

    /// Axis-aligned bounds (min point, max point).
    std::pair<GeoPoint, GeoPoint> bounding_box() const;

    friend bool operator==(const SpatialObject&, const SpatialObject&) = default;

private:
    std::variant<GeoPoint, Polyline, Polygon> shape_;
    SpatialReference crs_;
};

/// Seconds since the Unix epoch, never negative.
struct TimeInstant {
    std::int64_t t = 0;

    TimeInstant() = default;
    explicit TimeInstant(std::int64_t seconds);

    auto operator<=>(const TimeInstant&) const = default;
};

/// Closed interval [begin, end] with begin <= end.
struct TimeInterval {
    TimeInstant begin;
    TimeInstant end;
    TimeReference tref;

    TimeInterval() = default;
    TimeInterval(TimeInstant b, TimeInstant e, TimeReference r = {});

    static TimeInterval instant(std::int64_t t) { return {TimeInstant(t), TimeInstant(t)}; }

    std::int64_t duration() const { return end.t - begin.t; }
    bool contains(const TimeInterval& other) const {
        return begin <= other.begin && other.end <= end;
    }

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Euclidean distance in meters.
double distance(const GeoPoint& a, const GeoPoint& b);

/// Boundary-inclusive point-in-polygon test (ray casting plus explicit
/// on-segment check).
bool point_in_polygon(const GeoPoint& p, const Polygon& poly);

/// Closed-interval overlap: a.begin <= b.end and b.begin <= a.end.
bool interval_overlaps(const TimeInterval& a, const TimeInterval& b);

/// Arithmetic mean of a nonempty point list.
GeoPoint centroid(const std::vector<GeoPoint>& ps);

} // namespace traj

#endif // TRAJ_GEOMETRY_HPP
