#ifndef TRAJ_PIPELINE_HPP
#define TRAJ_PIPELINE_HPP

#include "traj/segmentation.hpp"
#include "traj/store.hpp"

#include <optional>
#include <string>

namespace traj {

/// Segments every object's raw trajectory (or just one) and materializes the
/// structured results in the store. Per-object work runs in parallel; commits
/// happen in object order, so the outcome is deterministic.
std::size_t run_segmentation(TrajectoryStore& store, const SegmentationParams& params,
                             const std::optional<std::string>& object = std::nullopt);

/// Annotates every materialized structured trajectory against the loaded
/// region forest. Fails when no regions are loaded or nothing is segmented.
std::size_t run_annotation(TrajectoryStore& store);

} // namespace traj

#endif // TRAJ_PIPELINE_HPP
