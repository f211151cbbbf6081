#ifndef TRAJ_STORE_HPP
#define TRAJ_STORE_HPP

#include "traj/activity.hpp"
#include "traj/model.hpp"
#include "traj/observation.hpp"
#include "traj/regions.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace traj {

/// Axis-aligned spatio-temporal query window (closed on all sides).
struct STWindow {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    TimeInterval time;

    STWindow() = default;
    STWindow(double x0, double x1, double y0, double y1, TimeInterval t);

    friend bool operator==(const STWindow&, const STWindow&) = default;
};

/// Uniform spatio-temporal grid over the event collection. Point events land
/// in the single cell their fix falls in; line/area events are indexed by
/// every cell their bounding box touches. Candidate pruning only — the exact
/// window predicate always re-filters.
struct GridIndex {
    double cell_size = 0.0;
    std::int64_t time_bucket = 0;
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::vector<std::string>> buckets;
    std::uint64_t built_at_revision = 0;

    static std::int64_t cell_of(double v, double size);
    static std::int64_t bucket_of(std::int64_t t, std::int64_t bucket);
};

/// Activity attached to an event at its begin or end.
struct ActivityLink {
    std::string activity_id;
    std::string event_id;
    AttachRole role = AttachRole::BeginsAt;

    auto operator<=>(const ActivityLink&) const = default;
};

/// In-memory single source of truth for every domain entity.
///
/// Single-writer, multi-reader: mutating calls must not race each other or
/// readers; all query paths are const and safe to run concurrently once
/// mutation has quiesced (the OpenMP kernels rely on that).
class TrajectoryStore {
public:
    TrajectoryStore() = default;

    std::uint64_t revision() const { return revision_; }

    // --- events -----------------------------------------------------------
    std::uint64_t upsert_event(SpaceTimeEvent e);
    const SpaceTimeEvent& event(const std::string& id) const;
    const SpaceTimeEvent* find_event(const std::string& id) const;
    const std::map<std::string, SpaceTimeEvent>& events() const { return events_; }
    std::optional<std::string> parent_of(const std::string& event_id) const;

    /// Appends child to parent's children, enforcing single-parent, temporal
    /// containment and acyclicity.
    std::uint64_t add_child_event(const std::string& parent_id, const std::string& child_id);

    /// Objects that own at least one instantaneous point event (a raw fix).
    std::vector<std::string> raw_object_ids() const;

    /// The raw trajectory view of one object's point events.
    RawTrajectory raw_trajectory(const std::string& object_id) const;

    // --- regions ----------------------------------------------------------
    /// Replaces-or-inserts a batch of region definitions; the forest is
    /// rebuilt and the whole batch rolls back if it fails validation.
    std::uint64_t upsert_regions(const std::vector<RegionDef>& defs);
    std::uint64_t upsert_region(const RegionDef& def) { return upsert_regions({def}); }
    const RegionForest& forest() const { return forest_; }
    const std::map<std::string, RegionDef>& region_defs() const { return region_defs_; }

    // --- devices ----------------------------------------------------------
    /// Strict registration: duplicate device ids are rejected.
    std::uint64_t register_device(const DeviceProxy& d);
    /// Replace-by-id variant used by file ingestion.
    std::uint64_t upsert_device(const DeviceProxy& d);
    const std::map<std::string, DeviceProxy>& devices() const { return devices_; }

    /// Device that captured the event, absent when the event names none.
    /// A device id that resolves to nothing is a dangling reference.
    std::optional<DeviceProxy> device_of(const std::string& event_id) const;

    // --- observations -----------------------------------------------------
    std::uint64_t record_observation(const Observation& o);
    const std::map<std::string, Observation>& observations() const { return observations_; }
    /// Observations of one event in (time, id) order.
    std::vector<Observation> observations_of(const std::string& event_id) const;

    // --- activities & paths -------------------------------------------------
    std::uint64_t upsert_activity(const Activity& a);
    const std::map<std::string, Activity>& activities() const { return activities_; }
    const Activity& activity(const std::string& id) const;

    std::uint64_t attach_activity(const std::string& event_id, const std::string& activity_id,
                                  AttachRole role);
    const std::set<ActivityLink>& activity_links() const { return links_; }

    SpaceTimePath build_path(const std::string& object_id) const;

    Process compose_process(const std::string& name, const std::vector<std::string>& activity_ids);
    const std::map<std::string, Process>& processes() const { return processes_; }

    // --- materialized presentations -----------------------------------------
    std::uint64_t put_structured(StructuredTrajectory st);
    std::uint64_t put_semantic(SemanticTrajectory st);
    const std::map<std::string, StructuredTrajectory>& structured() const { return structured_; }
    const std::map<std::string, SemanticTrajectory>& semantic() const { return semantic_; }

    // --- index & window queries ---------------------------------------------
    /// Rebuilds the grid and publishes it atomically (readers see the old or
    /// the new index, never a partial one).
    std::shared_ptr<const GridIndex> build_index(double cell_size, std::int64_t time_bucket);
    std::shared_ptr<const GridIndex> index() const { return index_; }

    /// Event ids whose representative point falls in the window rectangle and
    /// whose interval overlaps the window time; sorted. Uses the grid for
    /// pruning when a fresh index exists, otherwise scans.
    std::vector<std::string> window_query(const STWindow& w) const;

    // --- persistence --------------------------------------------------------
    void save_snapshot(const std::string& path) const;
    static TrajectoryStore load_snapshot(const std::string& path);
    std::vector<std::uint8_t> to_snapshot_bytes() const;
    static TrajectoryStore from_snapshot_bytes(const std::vector<std::uint8_t>& bytes);

    /// Deterministic sorted text dump (by entity kind, then id). Two stores
    /// with equal exports answer every query identically.
    std::string canonical_export() const;

private:
    std::uint64_t bump() { return ++revision_; }
    void check_device_reference(const SpaceTimeEvent& e) const;
    void unlink_children(const std::string& id);
    void link_children(const SpaceTimeEvent& e);

    std::map<std::string, SpaceTimeEvent> events_;
    std::map<std::string, std::string> parent_; // child id -> parent id
    std::map<std::string, RegionDef> region_defs_;
    RegionForest forest_;
    std::map<std::string, DeviceProxy> devices_;
    std::map<std::string, Observation> observations_;
    std::map<std::string, Activity> activities_;
    std::map<std::string, Process> processes_;
    std::set<ActivityLink> links_;
    std::map<std::string, StructuredTrajectory> structured_;
    std::map<std::string, SemanticTrajectory> semantic_;
    std::shared_ptr<const GridIndex> index_;
    std::uint64_t revision_ = 0;
};

} // namespace traj

#endif // TRAJ_STORE_HPP
