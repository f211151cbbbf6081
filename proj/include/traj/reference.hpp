#ifndef TRAJ_REFERENCE_HPP
#define TRAJ_REFERENCE_HPP

#include "traj/query.hpp"
#include "traj/segmentation.hpp"
#include "traj/store.hpp"

// Serial reference implementations, written directly from the definitions.
// They are the correctness oracles for the production kernels (tests compare
// exact outputs) and the baselines the benchmark measures against. Nothing
// here touches the grid index or OpenMP.

namespace traj::ref {

/// O(n^2) anchor segmentation: every window recheck scans all its points.
StructuredTrajectory detect_stops(const RawTrajectory& raw, const SegmentationParams& params);

/// Full linear scan over all events, ignoring any index.
std::vector<std::string> window_scan(const TrajectoryStore& store, const STWindow& w);

/// Nearest site by exhaustive argmin, ties to the smallest id.
std::string nearest_site(const GeoPoint& p,
                         const std::vector<std::pair<std::string, GeoPoint>>& sites);

/// Naive query evaluator: direct nested loops over store entities, subtree
/// enumeration for region membership, no pruning, no parallelism.
ResultTable evaluate(const QueryAst& ast, const TrajectoryStore& store);

} // namespace traj::ref

#endif // TRAJ_REFERENCE_HPP
