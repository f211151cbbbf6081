#include "traj/regions.hpp"

#include <algorithm>
#include <set>

namespace traj {

const ObjectOfInterest& RegionForest::region(const std::string& id) const {
    auto it = regions_.find(id);
    if (it == regions_.end()) throw NotFoundError("unknown region id: " + id);
    return it->second;
}

std::vector<std::string> RegionForest::find_by_name(const std::string& name) const {
    std::vector<std::string> out;
    for (const auto& [id, r] : regions_) {
        if (r.name == name) out.push_back(id);
    }
    return out;
}

std::vector<std::string> RegionForest::ancestors(const std::string& id) const {
    std::vector<std::string> chain;
    const ObjectOfInterest* cur = &region(id);
    while (cur->parent) {
        chain.push_back(*cur->parent);
        cur = &region(*cur->parent);
    }
    return chain;
}

RegionForest build_forest(std::vector<RegionDef> defs) {
    RegionForest forest;
    for (const RegionDef& d : defs) {
        if (d.id.empty()) throw ValidationError("region with empty id");
        if (d.name.empty()) throw ValidationError("region " + d.id + " has empty name");
        auto [it, inserted] = forest.regions_.emplace(
            d.id, ObjectOfInterest{d.id, d.name, d.category, d.parent, {}, d.geometry, 0});
        if (!inserted) throw ValidationError("duplicate region id: " + d.id);
        (void)it;
    }
    // Children keep definition order.
    for (const RegionDef& d : defs) {
        if (!d.parent) continue;
        auto pit = forest.regions_.find(*d.parent);
        if (pit == forest.regions_.end()) {
            throw ValidationError("region " + d.id + " names unknown parent " + *d.parent);
        }
        pit->second.children.push_back(d.id);
    }
    // Depths via parent chains; a chain longer than the forest is a cycle.
    for (auto& [id, r] : forest.regions_) {
        std::size_t depth = 0;
        const ObjectOfInterest* cur = &r;
        std::vector<std::string> trail{id};
        while (cur->parent) {
            if (depth++ > forest.regions_.size()) break;
            trail.push_back(*cur->parent);
            if (*cur->parent == id) {
                std::string cycle;
                for (const std::string& t : trail) cycle += (cycle.empty() ? "" : " -> ") + t;
                throw ValidationError("region parent cycle: " + cycle);
            }
            cur = &forest.regions_.at(*cur->parent);
        }
        if (depth > forest.regions_.size()) {
            throw ValidationError("region parent cycle involving " + id);
        }
        r.depth = depth;
    }
    for (const RegionDef& d : defs) {
        if (!d.parent) forest.roots_.push_back(d.id);
        if (d.is_site()) forest.site_ids_.push_back(d.id);
    }
    std::sort(forest.site_ids_.begin(), forest.site_ids_.end());
    return forest;
}

std::string voronoi_member(const GeoPoint& p,
                           const std::vector<std::pair<std::string, GeoPoint>>& sites) {
    if (sites.empty()) throw ArgumentError("voronoi membership over an empty site set");
    const std::string* best = nullptr;
    double best_d = 0.0;
    for (const auto& [id, site] : sites) {
        const double d = distance(p, site);
        if (!best || d < best_d || (d == best_d && id < *best)) {
            best = &id;
            best_d = d;
        }
    }
    return *best;
}

namespace {

std::vector<std::pair<std::string, GeoPoint>> site_list(const RegionForest& forest) {
    std::vector<std::pair<std::string, GeoPoint>> sites;
    sites.reserve(forest.site_ids().size());
    for (const std::string& id : forest.site_ids()) {
        sites.emplace_back(id, std::get<GeoPoint>(forest.region(id).geometry));
    }
    return sites;
}

bool own_geometry_hit(const GeoPoint& p, const ObjectOfInterest& r, const RegionForest& forest) {
    if (r.is_site()) {
        return voronoi_member(p, site_list(forest)) == r.id;
    }
    return point_in_polygon(p, std::get<Polygon>(r.geometry));
}

} // namespace

bool is_member(const GeoPoint& p, const std::string& region_id, const RegionForest& forest) {
    const ObjectOfInterest& r = forest.region(region_id);
    if (own_geometry_hit(p, r, forest)) return true;
    for (const std::string& child : r.children) {
        if (is_member(p, child, forest)) return true;
    }
    return false;
}

std::optional<std::string> deepest_region(const GeoPoint& p, const RegionForest& forest) {
    std::optional<std::string> best;
    std::size_t best_depth = 0;
    for (const auto& [id, r] : forest.regions()) {
        if (!own_geometry_hit(p, r, forest)) continue;
        // A direct hit makes every ancestor a member too, but ancestors are
        // never deeper, so only direct hits can win.
        if (!best || r.depth > best_depth || (r.depth == best_depth && id < *best)) {
            best = id;
            best_depth = r.depth;
        }
    }
    return best;
}

std::vector<Visit> visits(const SemanticTrajectory& semantic, const RegionForest& forest) {
    std::vector<Visit> out;
    const StructuredTrajectory& base = semantic.base;
    for (std::size_t k = 0; k < base.episodes.size(); ++k) {
        const Episode& ep = base.episodes[k];
        if (ep.kind != EpisodeKind::Stop) continue;
        const auto& ann = semantic.annotations[k];
        if (!ann || ann->region_id.empty()) continue;
        out.push_back(Visit{base.object_id, ann->region_id, ep.time, false});
        for (const std::string& anc : forest.ancestors(ann->region_id)) {
            out.push_back(Visit{base.object_id, anc, ep.time, true});
        }
    }
    return out;
}

} // namespace traj
