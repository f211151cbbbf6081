#ifndef TRAJ_REGIONS_HPP
#define TRAJ_REGIONS_HPP

#include "traj/geometry.hpp"
#include "traj/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace traj {

/// Geometry of a region: an explicit polygon, or a Voronoi site whose cell is
/// implied by the forest's full site set.
using RegionGeometry = std::variant<Polygon, GeoPoint>;

/// Definition record for one region, as ingested.
struct RegionDef {
    std::string id;
    std::string name;
    std::string category;
    std::optional<std::string> parent;
    RegionGeometry geometry;

    bool is_site() const { return geometry.index() == 1; }

    friend bool operator==(const RegionDef&, const RegionDef&) = default;
};

/// A named region of interest inside the forest.
struct ObjectOfInterest {
    std::string id;
    std::string name;
    std::string category;
    std::optional<std::string> parent;
    std::vector<std::string> children; // definition order
    RegionGeometry geometry;
    std::size_t depth = 0; // root = 0

    bool is_site() const { return geometry.index() == 1; }

    friend bool operator==(const ObjectOfInterest&, const ObjectOfInterest&) = default;
};

/// Validated forest of composite regions. Membership in a child implies
/// membership in every ancestor.
class RegionForest {
public:
    RegionForest() = default;

    bool empty() const { return regions_.empty(); }
    std::size_t size() const { return regions_.size(); }
    bool contains(const std::string& id) const { return regions_.count(id) != 0; }

    const ObjectOfInterest& region(const std::string& id) const;
    const std::map<std::string, ObjectOfInterest>& regions() const { return regions_; }
    const std::vector<std::string>& roots() const { return roots_; }
    /// Ids of all Site-geometry regions, sorted.
    const std::vector<std::string>& site_ids() const { return site_ids_; }

    /// Region ids sorted by name; several regions may share a name.
    std::vector<std::string> find_by_name(const std::string& name) const;

    /// Chain of ancestors from the region's parent up to its root.
    std::vector<std::string> ancestors(const std::string& id) const;

    friend RegionForest build_forest(std::vector<RegionDef> defs);
    friend bool operator==(const RegionForest&, const RegionForest&) = default;

private:
    std::map<std::string, ObjectOfInterest> regions_;
    std::vector<std::string> roots_;
    std::vector<std::string> site_ids_;
};

/// Validates links and builds the forest. Rejects duplicate ids, unknown
/// parents and cycles (the cycle error names the cycle).
RegionForest build_forest(std::vector<RegionDef> defs);

/// Nearest site by Euclidean distance, ties broken by smallest id.
/// `sites` is a nonempty list of (id, location) pairs.
std::string voronoi_member(const GeoPoint& p,
                           const std::vector<std::pair<std::string, GeoPoint>>& sites);

/// Composite membership: p hits the region's own geometry, or any descendant.
bool is_member(const GeoPoint& p, const std::string& region_id, const RegionForest& forest);

/// Deepest region containing p (ties at equal depth: smallest id), or absent.
std::optional<std::string> deepest_region(const GeoPoint& p, const RegionForest& forest);

/// A dwell of one object's stop inside a region.
struct Visit {
    std::string object_id;
    std::string region_id;
    TimeInterval time;
    bool via_descendant = false;

    friend bool operator==(const Visit&, const Visit&) = default;
};

/// One Visit per annotated Stop for its region, plus one per ancestor with
/// via_descendant=true, ordered by stop time (deepest region first per stop).
std::vector<Visit> visits(const SemanticTrajectory& semantic, const RegionForest& forest);

} // namespace traj

#endif // TRAJ_REGIONS_HPP
