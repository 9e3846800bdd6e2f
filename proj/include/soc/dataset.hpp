#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soc/mat.hpp"
#include "soc/scene.hpp"
#include "soc/spatial_index.hpp"

namespace soc {

struct DbHeader {
    std::uint32_t n_t = 0;
    std::uint32_t n_c = 0;
    double center_frequency = 0.0;
    double bandwidth = 0.0;
    std::uint64_t scene_fingerprint = 0;
    std::uint64_t seed = 0;
    double density = 0.0;  // samples per m²
};

struct DbRecord {
    Vec3 position;
    CMat g;  // angular-delay channel at the position
};

/// Immutable database of static angular-delay samples with an exact
/// nearest-neighbor index over their positions.
class StaticSampleDb {
public:
    StaticSampleDb(DbHeader header, std::vector<DbRecord> records);

    const DbHeader& header() const { return header_; }
    std::size_t size() const { return records_.size(); }
    const DbRecord& record(std::size_t i) const { return records_[i]; }

    /// Euclidean nearest record; distance ties go to the lowest index.
    std::size_t nearest_index(const Vec3& pos) const;
    const DbRecord& nearest(const Vec3& pos) const { return records_[nearest_index(pos)]; }
    std::vector<std::size_t> k_nearest(const Vec3& pos, std::size_t k) const;

    /// Binary format "SOCDB1"; bit-exact round trip.
    void save(const std::string& path) const;
    static StaticSampleDb load(const std::string& path);

private:
    DbHeader header_;
    std::vector<DbRecord> records_;
    KdTree3 index_;
};

/// Draws ⌊density · area⌋ positions uniformly over the scene's UE area
/// (seeded), computing each position's angular-delay channel from the
/// closed-form oracle.
StaticSampleDb sample_static_db(const ScattererScene& scene, double density,
                                std::uint64_t seed);

struct TrajectoryStep {
    double time = 0.0;  // seconds from sequence start
    Vec3 position;
    CMat channel;  // mobile CFR, antenna-frequency domain
};

struct Trajectory {
    double speed = 0.0;      // v_u
    double direction = 0.0;  // θ_v
    std::vector<TrajectoryStep> steps;
};

struct TrajectoryDataset {
    std::uint32_t n_t = 0;
    std::uint32_t n_c = 0;
    double center_frequency = 0.0;
    double bandwidth = 0.0;
    std::uint64_t scene_fingerprint = 0;
    std::uint64_t seed = 0;
    double interval = 0.0;  // seconds between steps
    std::vector<Trajectory> trajectories;

    /// Binary format "SOCTR1"; bit-exact round trip.
    void save(const std::string& path) const;
    static TrajectoryDataset load(const std::string& path);
};

/// Uniform linear motion sequences: seeded draws of start, bearing, and
/// speed in [speed_lo, speed_hi]; a draw whose path would leave the UE
/// area is rejected and redrawn (bounded retries).
TrajectoryDataset generate_trajectories(const ScattererScene& scene, int count, int length,
                                        double interval_s, double speed_lo, double speed_hi,
                                        std::uint64_t seed);

}  // namespace soc
