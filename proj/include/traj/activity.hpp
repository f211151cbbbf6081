#ifndef TRAJ_ACTIVITY_HPP
#define TRAJ_ACTIVITY_HPP

#include "traj/model.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace traj {

enum class ActivityKind { Physical, Virtual };

const char* to_string(ActivityKind kind);
ActivityKind activity_kind_from_string(const std::string& s);

/// A labeled physical or virtual action of one object over a time interval.
/// Physical activities must carry a location; virtual ones may omit it.
struct Activity {
    std::string id;
    std::string object_id;
    ActivityKind kind = ActivityKind::Physical;
    std::string label;
    TimeInterval time;
    std::optional<GeoPoint> location;

    friend bool operator==(const Activity&, const Activity&) = default;
};

void validate(const Activity& a);

/// Ordered composition of one object's activities.
struct Process {
    std::string id;
    std::string name;
    std::string object_id;
    std::vector<std::string> activity_ids; // ordered by activity begin time

    friend bool operator==(const Process&, const Process&) = default;
};

/// Whether an activity is pinned to an event's start or its finish.
enum class AttachRole { BeginsAt, EndsAt };

const char* to_string(AttachRole role);

/// One event of a space-time path with the activities beginning/ending there.
struct PathEntry {
    SpaceTimeEvent event;
    std::vector<Activity> begin_activities; // sorted by (begin, id)
    std::vector<Activity> end_activities;

    friend bool operator==(const PathEntry&, const PathEntry&) = default;
};

/// Time-ordered container of one object's events and their activities.
struct SpaceTimePath {
    std::string object_id;
    std::vector<PathEntry> entries; // sorted per compare_events

    friend bool operator==(const SpaceTimePath&, const SpaceTimePath&) = default;
};

/// Total order over nonempty paths by (first event per compare_events,
/// then object_id). Empty paths are rejected.
std::strong_ordering compare_paths(const SpaceTimePath& p, const SpaceTimePath& q);

} // namespace traj

#endif // TRAJ_ACTIVITY_HPP
