#ifndef TRAJ_TEST_FIXTURES_HPP
#define TRAJ_TEST_FIXTURES_HPP

#include "traj/segmentation.hpp"
#include "traj/store.hpp"

#include <random>
#include <string>
#include <vector>

namespace traj::fixtures {

/// Adds one point fix (event id `<object>#<t>`) to the store.
void add_point(TrajectoryStore& store, const std::string& object, double x, double y,
               std::int64_t t, const std::string& device = {});

/// Region tree mirroring the composite hypermarket example: a root with
/// parking/bank/supermarket/department-store/restaurant children and a
/// cosmetics chain nested under the supermarket.
std::vector<RegionDef> hypermarket_regions();

/// Four disjoint boxes named house/school/"bus station"/stadium.
std::vector<RegionDef> tour_regions();

/// Trace for `person-1` stopping in house, school, bus station and stadium in
/// that order (eps=15, tau=600 segments it into 4 stops and 3 moves).
void add_tour_trace(TrajectoryStore& store, const std::string& object = "person-1");

/// Trace for `person-2` dwelling in bank, restaurant and cosmetics.
void add_hypermarket_trace(TrajectoryStore& store, const std::string& object = "person-2");

/// Deterministic rich store: 10 objects x 200 points, 12 regions (nested
/// polygons plus two Voronoi sites), 4 devices, 8 activities attached to
/// events. Segmentation/annotation are left to the caller.
TrajectoryStore generated_store();

/// Segmentation parameters that produce stops on the generated store.
SegmentationParams generated_params();

/// Uniformly random simple trace of up to max_points points.
RawTrajectory random_trace(std::mt19937& rng, const std::string& object, std::size_t max_points);

} // namespace traj::fixtures

#endif // TRAJ_TEST_FIXTURES_HPP
