#ifndef TRAJ_MODEL_HPP
#define TRAJ_MODEL_HPP

#include "traj/geometry.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace traj {

/// Semantic role of an event or episode in the stop/move vocabulary.
enum class SemanticRole { Begin, End, Stop, Move };

const char* to_string(SemanticRole role);

/// Place annotation attached to an event.
struct SemanticTag {
    std::string place_name;
    std::string category;
    SemanticRole role = SemanticRole::Stop;

    friend bool operator==(const SemanticTag&, const SemanticTag&) = default;
};

/// Checks the tag's own invariant (Stop/Begin/End tags must name a place).
void validate(const SemanticTag& tag);

/// The atomic occurrence: something happening in a small space over a short
/// time, optionally composed of child events.
struct SpaceTimeEvent {
    std::string id;
    std::string object_id;
    SpatialObject spatial;
    TimeInterval time;
    std::optional<std::string> device_id;
    std::optional<SemanticTag> semantic;
    std::vector<std::string> children;

    friend bool operator==(const SpaceTimeEvent&, const SpaceTimeEvent&) = default;
};

void validate(const SpaceTimeEvent& e);

/// One recorded position fix.
struct RawPoint {
    GeoPoint p;
    TimeInstant t;
    std::optional<std::string> device_id;

    friend bool operator==(const RawPoint&, const RawPoint&) = default;
};

/// Time-ordered sequence of position fixes for one object.
struct RawTrajectory {
    std::string object_id;
    std::vector<RawPoint> points;

    friend bool operator==(const RawTrajectory&, const RawTrajectory&) = default;
};

/// Builds a RawTrajectory, rejecting empty input and non-strictly-increasing
/// timestamps (the error names the first offending index).
RawTrajectory validate_raw(const std::string& object_id, std::vector<RawPoint> points);

enum class EpisodeKind { Stop, Move };

const char* to_string(EpisodeKind kind);

/// A contiguous index range of the source raw points, classified as a dwell
/// (Stop, point geometry at the centroid) or travel (Move, polyline geometry).
struct Episode {
    EpisodeKind kind = EpisodeKind::Move;
    std::size_t start_index = 0;
    std::size_t end_index = 0; // inclusive
    TimeInterval time;
    SpatialObject geometry;

    friend bool operator==(const Episode&, const Episode&) = default;
};

/// Raw trajectory partitioned into begin/end events plus stop/move episodes.
struct StructuredTrajectory {
    std::string object_id;
    RawTrajectory source;
    SpaceTimeEvent begin;
    SpaceTimeEvent end;
    std::vector<Episode> episodes;

    friend bool operator==(const StructuredTrajectory&, const StructuredTrajectory&) = default;
};

/// Verifies partition completeness, index sanity, episode geometry kinds and
/// the alternation rule (no two adjacent Move episodes; abutting Stops are
/// legal because the anchor segmentation can emit them back to back).
void validate(const StructuredTrajectory& st);

/// Per-episode place annotation. `crossed` lists the distinct regions a Move's
/// vertices fall in, in first-visit order; for Stops it holds the single
/// containing region.
struct EpisodeAnnotation {
    std::string place_name;
    std::string category;
    std::string region_id;
    std::vector<std::string> crossed;

    friend bool operator==(const EpisodeAnnotation&, const EpisodeAnnotation&) = default;
};

/// Structured trajectory whose episodes carry optional place annotations.
/// annotations.size() always equals base.episodes.size().
struct SemanticTrajectory {
    StructuredTrajectory base;
    std::vector<std::optional<EpisodeAnnotation>> annotations;

    friend bool operator==(const SemanticTrajectory&, const SemanticTrajectory&) = default;
};

void validate(const SemanticTrajectory& st);

/// Semantic role of an annotated episode: the first episode is where the
/// trajectory begins, the last where it ends, everything between keeps its
/// stop/move kind. Single-episode trajectories count as Begin.
SemanticRole episode_role(const StructuredTrajectory& st, std::size_t episode_index);

/// Total order over events by (time.begin, time.end, id).
std::strong_ordering compare_events(const SpaceTimeEvent& a, const SpaceTimeEvent& b);

} // namespace traj

#endif // TRAJ_MODEL_HPP
