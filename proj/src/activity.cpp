#include "traj/activity.hpp"

namespace traj {

const char* to_string(ActivityKind kind) {
    return kind == ActivityKind::Physical ? "Physical" : "Virtual";
}

ActivityKind activity_kind_from_string(const std::string& s) {
    if (s == "Physical") return ActivityKind::Physical;
    if (s == "Virtual") return ActivityKind::Virtual;
    throw ValidationError("unknown activity kind: " + s);
}

const char* to_string(AttachRole role) {
    return role == AttachRole::BeginsAt ? "begins-at" : "ends-at";
}

void validate(const Activity& a) {
    if (a.id.empty()) throw ValidationError("activity id must be non-empty");
    if (a.object_id.empty()) throw ValidationError("activity " + a.id + " has empty object id");
    if (a.label.empty()) throw ValidationError("activity " + a.id + " has empty label");
    if (a.kind == ActivityKind::Physical && !a.location) {
        throw ValidationError("physical activity " + a.id + " must have a location");
    }
}

std::strong_ordering compare_paths(const SpaceTimePath& p, const SpaceTimePath& q) {
    if (p.entries.empty() || q.entries.empty()) {
        throw ArgumentError("cannot order an empty space-time path");
    }
    if (auto c = compare_events(p.entries.front().event, q.entries.front().event); c != 0) {
        return c;
    }
    return p.object_id <=> q.object_id;
}

} // namespace traj
