#include "traj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace traj {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + " coordinate must be finite");
    }
}

int orientation(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
    const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (cross > 0.0) return 1;
    if (cross < 0.0) return -1;
    return 0;
}

bool on_segment(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p) {
    if (orientation(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x)
        && std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c, const GeoPoint& d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

void validate_ring(const std::vector<GeoPoint>& ring) {
    const std::size_t n = ring.size();
    if (n < 3) {
        throw ValidationError("polygon ring needs at least 3 vertices, got " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (ring[i] == ring[(i + 1) % n]) {
            throw ValidationError("polygon ring has equal consecutive vertices at index "
                                  + std::to_string(i));
        }
    }
    // Simplicity: non-adjacent edges must not touch; adjacent edges share
    // exactly their common endpoint (no collinear spike back over each other).
    for (std::size_t i = 0; i < n; ++i) {
        const GeoPoint& a = ring[i];
        const GeoPoint& b = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const GeoPoint& c = ring[j];
            const GeoPoint& d = ring[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // The shared endpoint is expected; reject overlap beyond it.
                const GeoPoint& shared = (j == i + 1) ? b : a;
                const GeoPoint& free_ab = (j == i + 1) ? a : b;
                const GeoPoint& free_cd = (j == i + 1) ? d : c;
                if (orientation(free_ab, shared, free_cd) == 0
                    && (on_segment(shared, free_cd, free_ab) || on_segment(shared, free_ab, free_cd))) {
                    throw ValidationError("polygon ring folds back on itself at vertex "
                                          + std::to_string((i + 1) % n));
                }
                continue;
            }
            if (segments_intersect(a, b, c, d)) {
                throw ValidationError("polygon ring self-intersects (edges " + std::to_string(i)
                                      + " and " + std::to_string(j) + ")");
            }
        }
    }
}

} // namespace

GeoPoint::GeoPoint(double x_, double y_) : x(x_), y(y_) {
    require_finite(x, "x");
    require_finite(y, "y");
}

Polyline::Polyline(std::vector<GeoPoint> vs) : vertices(std::move(vs)) {
    if (vertices.size() < 2) {
        throw ValidationError("polyline needs at least 2 vertices, got "
                              + std::to_string(vertices.size()));
    }
}

Polygon::Polygon(std::vector<GeoPoint> r) : ring(std::move(r)) {
    validate_ring(ring);
}

SpatialObject SpatialObject::point(GeoPoint p, SpatialReference crs) {
    SpatialObject o;
    o.shape_ = p;
    o.crs_ = std::move(crs);
    if (o.crs_.name.empty()) throw ValidationError("spatial reference name must be non-empty");
    return o;
}

SpatialObject SpatialObject::line(Polyline l, SpatialReference crs) {
    SpatialObject o;
    o.shape_ = std::move(l);
    o.crs_ = std::move(crs);
    if (o.crs_.name.empty()) throw ValidationError("spatial reference name must be non-empty");
    return o;
}

SpatialObject SpatialObject::area(Polygon a, SpatialReference crs) {
    SpatialObject o;
    o.shape_ = std::move(a);
    o.crs_ = std::move(crs);
    if (o.crs_.name.empty()) throw ValidationError("spatial reference name must be non-empty");
    return o;
}

const GeoPoint& SpatialObject::as_point() const {
    if (!is_point()) throw ArgumentError("spatial object is not a point");
    return std::get<GeoPoint>(shape_);
}

const Polyline& SpatialObject::as_line() const {
    if (!is_line()) throw ArgumentError("spatial object is not a line");
    return std::get<Polyline>(shape_);
}

const Polygon& SpatialObject::as_area() const {
    if (!is_area()) throw ArgumentError("spatial object is not an area");
    return std::get<Polygon>(shape_);
}

GeoPoint SpatialObject::representative_point() const {
    switch (kind()) {
    case Kind::Point: return as_point();
    case Kind::Line: return centroid(as_line().vertices);
    case Kind::Area: return centroid(as_area().ring);
    }
    throw ArgumentError("unreachable spatial kind");
}

std::pair<GeoPoint, GeoPoint> SpatialObject::bounding_box() const {
    const std::vector<GeoPoint>* vs = nullptr;
    if (is_point()) {
        const GeoPoint& p = as_point();
        return {p, p};
    }
    vs = is_line() ? &as_line().vertices : &as_area().ring;
    GeoPoint lo = (*vs)[0];
    GeoPoint hi = (*vs)[0];
    for (const GeoPoint& p : *vs) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    return {lo, hi};
}

TimeInstant::TimeInstant(std::int64_t seconds) : t(seconds) {
    if (t < 0) {
        throw ValidationError("time instant must be >= 0, got " + std::to_string(t));
    }
}

TimeInterval::TimeInterval(TimeInstant b, TimeInstant e, TimeReference r)
    : begin(b), end(e), tref(std::move(r)) {
    if (end < begin) {
        throw ValidationError("time interval end " + std::to_string(end.t)
                              + " precedes begin " + std::to_string(begin.t));
    }
    if (tref.name.empty()) throw ValidationError("time reference name must be non-empty");
}

double distance(const GeoPoint& a, const GeoPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool point_in_polygon(const GeoPoint& p, const Polygon& poly) {
    validate_ring(poly.ring);
    const std::vector<GeoPoint>& ring = poly.ring;
    const std::size_t n = ring.size();

    for (std::size_t i = 0; i < n; ++i) {
        if (on_segment(ring[i], ring[(i + 1) % n], p)) return true;
    }

    // Ray casting towards +x; boundary hits were already handled above.
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        const GeoPoint& a = ring[i];
        const GeoPoint& b = ring[(i + 1) % n];
        const bool crosses = (a.y > p.y) != (b.y > p.y);
        if (!crosses) continue;
        const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x_at) inside = !inside;
    }
    return inside;
}

bool interval_overlaps(const TimeInterval& a, const TimeInterval& b) {
    return a.begin <= b.end && b.begin <= a.end;
}

GeoPoint centroid(const std::vector<GeoPoint>& ps) {
    if (ps.empty()) throw ArgumentError("centroid of empty point list");
    double sx = 0.0;
    double sy = 0.0;
    for (const GeoPoint& p : ps) {
        sx += p.x;
        sy += p.y;
    }
    return GeoPoint(sx / static_cast<double>(ps.size()), sy / static_cast<double>(ps.size()));
}

} // namespace traj
