#ifndef TRAJ_SEGMENTATION_HPP
#define TRAJ_SEGMENTATION_HPP

#include "traj/model.hpp"
#include "traj/regions.hpp"

namespace traj {

/// Stop detection thresholds: spatial neighborhood radius and minimum dwell.
struct SegmentationParams {
    double eps = 0.0;  // meters
    std::int64_t tau = 0; // seconds

    SegmentationParams() = default;
    SegmentationParams(double eps_, std::int64_t tau_);

    friend bool operator==(const SegmentationParams&, const SegmentationParams&) = default;
};

/// Anchor-based stop/move segmentation.
///
/// Scans left to right; at index i, j is the largest index such that every
/// point in [i..j] lies within eps of point i. If t_j - t_i >= tau the window
/// becomes a Stop (point geometry at its centroid) and the scan resumes at
/// j+1, otherwise i advances by one. Every maximal index range not inside a
/// Stop becomes a Move (polyline geometry; a single-point gap duplicates its
/// vertex to keep the polyline well-formed). Begin/End events materialize at
/// the first and last raw points.
StructuredTrajectory detect_stops(const RawTrajectory& raw, const SegmentationParams& params);

/// Annotates a structured trajectory against a region forest.
///
/// Stops get the deepest region containing their centroid; Moves get the
/// ordered distinct list of deepest regions their vertices fall in. Episode
/// boundaries never change. Begin/End events receive SemanticTags derived
/// from the first/last episode's annotation.
SemanticTrajectory annotate(const StructuredTrajectory& st, const RegionForest& forest);

} // namespace traj

#endif // TRAJ_SEGMENTATION_HPP
