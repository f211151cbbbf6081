#include "traj/store.hpp"

#include <algorithm>
#include <cmath>

namespace traj {

STWindow::STWindow(double x0, double x1, double y0, double y1, TimeInterval t)
    : x_min(x0), x_max(x1), y_min(y0), y_max(y1), time(std::move(t)) {
    if (x_min > x_max) throw ValidationError("window x_min exceeds x_max");
    if (y_min > y_max) throw ValidationError("window y_min exceeds y_max");
}

std::int64_t GridIndex::cell_of(double v, double size) {
    return static_cast<std::int64_t>(std::floor(v / size));
}

std::int64_t GridIndex::bucket_of(std::int64_t t, std::int64_t bucket) {
    std::int64_t q = t / bucket;
    if (t % bucket != 0 && ((t < 0) != (bucket < 0))) --q;
    return q;
}

// --- events ---------------------------------------------------------------

void TrajectoryStore::check_device_reference(const SpaceTimeEvent& e) const {
    if (!e.device_id || devices_.empty()) return; // lazy validation when no registry yet
    if (!devices_.count(*e.device_id)) {
        throw ValidationError("event " + e.id + " references unregistered device "
                              + *e.device_id);
    }
}

void TrajectoryStore::unlink_children(const std::string& id) {
    auto it = events_.find(id);
    if (it == events_.end()) return;
    for (const std::string& child : it->second.children) parent_.erase(child);
}

void TrajectoryStore::link_children(const SpaceTimeEvent& e) {
    for (const std::string& child : e.children) parent_[child] = e.id;
}

std::uint64_t TrajectoryStore::upsert_event(SpaceTimeEvent e) {
    validate(e);
    check_device_reference(e);
    std::set<std::string> seen;
    for (const std::string& child : e.children) {
        if (child == e.id) throw ValidationError("event " + e.id + " lists itself as a child");
        if (!seen.insert(child).second) {
            throw ValidationError("event " + e.id + " lists child " + child + " twice");
        }
        auto cit = events_.find(child);
        if (cit == events_.end()) {
            throw NotFoundError("event " + e.id + " references unknown child " + child);
        }
        auto pit = parent_.find(child);
        if (pit != parent_.end() && pit->second != e.id) {
            throw ValidationError("event " + child + " already has parent " + pit->second);
        }
        if (!e.time.contains(cit->second.time)) {
            throw ValidationError("child " + child + " time is not contained in event "
                                  + e.id + " time");
        }
    }
    // Gaining children may only cycle if one of them is an ancestor of e.
    for (auto pit = parent_.find(e.id); pit != parent_.end(); pit = parent_.find(pit->second)) {
        if (seen.count(pit->second)) {
            throw ValidationError("event composition cycle through " + pit->second);
        }
    }
    if (auto pit = parent_.find(e.id); pit != parent_.end()) {
        if (!events_.at(pit->second).time.contains(e.time)) {
            throw ValidationError("event " + e.id + " time escapes its parent " + pit->second);
        }
    }
    unlink_children(e.id);
    link_children(e);
    events_[e.id] = std::move(e);
    return bump();
}

const SpaceTimeEvent& TrajectoryStore::event(const std::string& id) const {
    auto it = events_.find(id);
    if (it == events_.end()) throw NotFoundError("unknown event id: " + id);
    return it->second;
}

const SpaceTimeEvent* TrajectoryStore::find_event(const std::string& id) const {
    auto it = events_.find(id);
    return it == events_.end() ? nullptr : &it->second;
}

std::optional<std::string> TrajectoryStore::parent_of(const std::string& event_id) const {
    auto it = parent_.find(event_id);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t TrajectoryStore::add_child_event(const std::string& parent_id,
                                               const std::string& child_id) {
    auto pit = events_.find(parent_id);
    if (pit == events_.end()) throw NotFoundError("unknown parent event: " + parent_id);
    auto cit = events_.find(child_id);
    if (cit == events_.end()) throw NotFoundError("unknown child event: " + child_id);
    if (parent_id == child_id) throw ValidationError("event cannot be its own child");
    if (parent_.count(child_id)) {
        throw ValidationError("event " + child_id + " already has parent " + parent_.at(child_id));
    }
    for (auto anc = parent_.find(parent_id); anc != parent_.end(); anc = parent_.find(anc->second)) {
        if (anc->second == child_id) {
            throw ValidationError("adding " + child_id + " under " + parent_id
                                  + " would create a cycle");
        }
    }
    if (!pit->second.time.contains(cit->second.time)) {
        throw ValidationError("child " + child_id + " time is not contained in parent "
                              + parent_id + " time");
    }
    pit->second.children.push_back(child_id);
    parent_[child_id] = parent_id;
    return bump();
}

std::vector<std::string> TrajectoryStore::raw_object_ids() const {
    std::set<std::string> ids;
    for (const auto& [id, e] : events_) {
        if (e.spatial.is_point() && e.time.begin == e.time.end) ids.insert(e.object_id);
    }
    return {ids.begin(), ids.end()};
}

RawTrajectory TrajectoryStore::raw_trajectory(const std::string& object_id) const {
    std::vector<const SpaceTimeEvent*> fixes;
    for (const auto& [id, e] : events_) {
        if (e.object_id == object_id && e.spatial.is_point() && e.time.begin == e.time.end) {
            fixes.push_back(&e);
        }
    }
    if (fixes.empty()) throw NotFoundError("no raw points for object: " + object_id);
    std::sort(fixes.begin(), fixes.end(), [](const SpaceTimeEvent* a, const SpaceTimeEvent* b) {
        return std::tie(a->time.begin.t, a->id) < std::tie(b->time.begin.t, b->id);
    });
    std::vector<RawPoint> points;
    points.reserve(fixes.size());
    for (const SpaceTimeEvent* e : fixes) {
        points.push_back(RawPoint{e->spatial.as_point(), e->time.begin, e->device_id});
    }
    return validate_raw(object_id, std::move(points));
}

// --- regions ----------------------------------------------------------------

std::uint64_t TrajectoryStore::upsert_regions(const std::vector<RegionDef>& defs) {
    std::map<std::string, RegionDef> staged = region_defs_;
    for (const RegionDef& d : defs) {
        if (d.id.empty()) throw ValidationError("region with empty id");
        if (!d.is_site()) {
            Polygon checked(std::get<Polygon>(d.geometry).ring); // revalidates the ring
            (void)checked;
        }
        staged[d.id] = d;
    }
    std::vector<RegionDef> all;
    all.reserve(staged.size());
    for (const auto& [id, d] : staged) all.push_back(d);
    RegionForest rebuilt = build_forest(std::move(all)); // throws on cycles etc.
    region_defs_ = std::move(staged);
    forest_ = std::move(rebuilt);
    std::uint64_t rev = revision_;
    for (std::size_t i = 0; i < defs.size(); ++i) rev = bump();
    return rev;
}

// --- devices ----------------------------------------------------------------

std::uint64_t TrajectoryStore::register_device(const DeviceProxy& d) {
    validate(d);
    if (devices_.count(d.device_id)) {
        throw ArgumentError("device id already registered: " + d.device_id);
    }
    devices_[d.device_id] = d;
    return bump();
}

std::uint64_t TrajectoryStore::upsert_device(const DeviceProxy& d) {
    validate(d);
    devices_[d.device_id] = d;
    return bump();
}

std::optional<DeviceProxy> TrajectoryStore::device_of(const std::string& event_id) const {
    const SpaceTimeEvent& e = event(event_id);
    if (!e.device_id) return std::nullopt;
    auto it = devices_.find(*e.device_id);
    if (it == devices_.end()) {
        throw DanglingReferenceError("event " + event_id + " references unregistered device "
                                     + *e.device_id);
    }
    return it->second;
}

// --- observations -------------------------------------------------------------

std::uint64_t TrajectoryStore::record_observation(const Observation& o) {
    validate(o);
    if (!events_.count(o.event_id)) {
        throw NotFoundError("observation " + o.id + " references unknown event " + o.event_id);
    }
    observations_[o.id] = o;
    return bump();
}

std::vector<Observation> TrajectoryStore::observations_of(const std::string& event_id) const {
    std::vector<Observation> out;
    for (const auto& [id, o] : observations_) {
        if (o.event_id == event_id) out.push_back(o);
    }
    std::sort(out.begin(), out.end(), [](const Observation& a, const Observation& b) {
        return std::tie(a.time.t, a.id) < std::tie(b.time.t, b.id);
    });
    return out;
}

// --- activities & paths --------------------------------------------------------

std::uint64_t TrajectoryStore::upsert_activity(const Activity& a) {
    validate(a);
    activities_[a.id] = a;
    return bump();
}

const Activity& TrajectoryStore::activity(const std::string& id) const {
    auto it = activities_.find(id);
    if (it == activities_.end()) throw NotFoundError("unknown activity id: " + id);
    return it->second;
}

std::uint64_t TrajectoryStore::attach_activity(const std::string& event_id,
                                               const std::string& activity_id, AttachRole role) {
    const SpaceTimeEvent& e = event(event_id);
    const Activity& a = activity(activity_id);
    if (e.object_id != a.object_id) {
        throw ValidationError("activity " + activity_id + " belongs to " + a.object_id
                              + " but event " + event_id + " belongs to " + e.object_id);
    }
    ActivityLink link{activity_id, event_id, role};
    if (links_.count(link)) return revision_; // idempotent
    links_.insert(link);
    return bump();
}

SpaceTimePath TrajectoryStore::build_path(const std::string& object_id) const {
    std::vector<const SpaceTimeEvent*> evs;
    for (const auto& [id, e] : events_) {
        if (e.object_id == object_id) evs.push_back(&e);
    }
    if (evs.empty()) throw NotFoundError("unknown object (no events): " + object_id);
    std::sort(evs.begin(), evs.end(), [](const SpaceTimeEvent* a, const SpaceTimeEvent* b) {
        return compare_events(*a, *b) < 0;
    });

    auto sorted_acts = [&](const std::string& event_id, AttachRole role) {
        std::vector<Activity> acts;
        for (const ActivityLink& l : links_) {
            if (l.event_id == event_id && l.role == role) acts.push_back(activities_.at(l.activity_id));
        }
        std::sort(acts.begin(), acts.end(), [](const Activity& a, const Activity& b) {
            return std::tie(a.time.begin.t, a.id) < std::tie(b.time.begin.t, b.id);
        });
        return acts;
    };

    SpaceTimePath path;
    path.object_id = object_id;
    path.entries.reserve(evs.size());
    for (const SpaceTimeEvent* e : evs) {
        path.entries.push_back(PathEntry{*e, sorted_acts(e->id, AttachRole::BeginsAt),
                                         sorted_acts(e->id, AttachRole::EndsAt)});
    }
    return path;
}

Process TrajectoryStore::compose_process(const std::string& name,
                                         const std::vector<std::string>& activity_ids) {
    if (name.empty()) throw ArgumentError("process name must be non-empty");
    if (activity_ids.empty()) throw ArgumentError("process " + name + " has no activities");
    std::vector<const Activity*> acts;
    acts.reserve(activity_ids.size());
    for (const std::string& id : activity_ids) acts.push_back(&activity(id));
    for (const Activity* a : acts) {
        if (a->object_id != acts.front()->object_id) {
            throw ValidationError("process " + name + " mixes objects " + acts.front()->object_id
                                  + " and " + a->object_id);
        }
    }
    std::sort(acts.begin(), acts.end(), [](const Activity* a, const Activity* b) {
        return std::tie(a->time.begin.t, a->id) < std::tie(b->time.begin.t, b->id);
    });
    Process p;
    p.id = name;
    p.name = name;
    p.object_id = acts.front()->object_id;
    for (const Activity* a : acts) p.activity_ids.push_back(a->id);
    processes_[p.id] = p;
    bump();
    return p;
}

// --- materialized presentations --------------------------------------------------

std::uint64_t TrajectoryStore::put_structured(StructuredTrajectory st) {
    validate(st);
    const std::string object_id = st.object_id;
    structured_[object_id] = std::move(st);
    semantic_.erase(object_id); // stale after re-segmentation
    return bump();
}

std::uint64_t TrajectoryStore::put_semantic(SemanticTrajectory st) {
    validate(st);
    semantic_[st.base.object_id] = std::move(st);
    return bump();
}

// --- index & window queries --------------------------------------------------------

std::shared_ptr<const GridIndex> TrajectoryStore::build_index(double cell_size,
                                                              std::int64_t time_bucket) {
    if (!(cell_size > 0.0)) throw ArgumentError("index cell size must be > 0");
    if (time_bucket <= 0) throw ArgumentError("index time bucket must be > 0");
    auto idx = std::make_shared<GridIndex>();
    idx->cell_size = cell_size;
    idx->time_bucket = time_bucket;
    idx->built_at_revision = revision_;
    for (const auto& [id, e] : events_) {
        const auto [lo, hi] = e.spatial.bounding_box();
        const std::int64_t cx0 = GridIndex::cell_of(lo.x, cell_size);
        const std::int64_t cx1 = GridIndex::cell_of(hi.x, cell_size);
        const std::int64_t cy0 = GridIndex::cell_of(lo.y, cell_size);
        const std::int64_t cy1 = GridIndex::cell_of(hi.y, cell_size);
        const std::int64_t tb0 = GridIndex::bucket_of(e.time.begin.t, time_bucket);
        const std::int64_t tb1 = GridIndex::bucket_of(e.time.end.t, time_bucket);
        for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
            for (std::int64_t cy = cy0; cy <= cy1; ++cy) {
                for (std::int64_t tb = tb0; tb <= tb1; ++tb) {
                    idx->buckets[{cx, cy, tb}].push_back(id);
                }
            }
        }
    }
    index_ = idx; // single pointer assignment publishes the finished index
    return idx;
}

namespace {

bool window_hit(const SpaceTimeEvent& e, const STWindow& w) {
    const GeoPoint p = e.spatial.representative_point();
    return p.x >= w.x_min && p.x <= w.x_max && p.y >= w.y_min && p.y <= w.y_max
        && interval_overlaps(e.time, w.time);
}

} // namespace

std::vector<std::string> TrajectoryStore::window_query(const STWindow& w) const {
    STWindow checked(w.x_min, w.x_max, w.y_min, w.y_max, w.time);
    std::shared_ptr<const GridIndex> idx = index_;
    std::vector<std::string> out;

    if (idx && idx->built_at_revision == revision_) {
        std::vector<const std::string*> candidates;
        const std::int64_t cx0 = GridIndex::cell_of(w.x_min, idx->cell_size);
        const std::int64_t cx1 = GridIndex::cell_of(w.x_max, idx->cell_size);
        const std::int64_t cy0 = GridIndex::cell_of(w.y_min, idx->cell_size);
        const std::int64_t cy1 = GridIndex::cell_of(w.y_max, idx->cell_size);
        const std::int64_t tb0 = GridIndex::bucket_of(w.time.begin.t, idx->time_bucket);
        const std::int64_t tb1 = GridIndex::bucket_of(w.time.end.t, idx->time_bucket);
        for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
            for (std::int64_t cy = cy0; cy <= cy1; ++cy) {
                for (std::int64_t tb = tb0; tb <= tb1; ++tb) {
                    auto it = idx->buckets.find({cx, cy, tb});
                    if (it == idx->buckets.end()) continue;
                    for (const std::string& id : it->second) candidates.push_back(&id);
                }
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const std::string* a, const std::string* b) { return *a < *b; });
        candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                     [](const std::string* a, const std::string* b) {
                                         return *a == *b;
                                     }),
                         candidates.end());

        std::vector<char> keep(candidates.size(), 0);
        const std::int64_t n = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            keep[static_cast<std::size_t>(i)] =
                window_hit(events_.at(*candidates[static_cast<std::size_t>(i)]), checked) ? 1 : 0;
        }
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (keep[i]) out.push_back(*candidates[i]);
        }
        return out; // candidates were sorted, compaction preserves order
    }

    for (const auto& [id, e] : events_) {
        if (window_hit(e, checked)) out.push_back(id);
    }
    return out;
}

} // namespace traj
