#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "soc/angular_delay.hpp"
#include "soc/common.hpp"
#include "soc/dataset.hpp"
#include "soc/oracle.hpp"
#include "soc/scene.hpp"

using soc::CMat;
using soc::ScattererScene;
using soc::StaticSampleDb;
using soc::TrajectoryDataset;
using soc::Vec3;

namespace {

ScattererScene test_scene() {
    ScattererScene s;
    s.bs_position = {0.0, -40.0, 10.0};
    s.array_axis = {1.0, 0.0, 0.0};
    s.n_antennas = 4;
    s.n_subcarriers = 4;
    s.include_los = true;
    s.center_frequency = 3.5e9;
    s.bandwidth = 1e8;
    s.antenna_spacing = s.wavelength() / 2.0;
    s.ue_area = {-1.0, 1.0, -1.0, 1.0, 1.5};
    s.scatterers.push_back({{8.0, 3.0, 4.0}, 0.9});
    s.scatterers.push_back({{-6.0, 10.0, 2.0}, 0.7});
    s.validate();
    return s;
}

std::vector<char> read_file_bytes(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(static_cast<bool>(is));
    return std::vector<char>(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("sampling draws floor of density times area records") {
    ScattererScene scene = test_scene();
    StaticSampleDb db = soc::sample_static_db(scene, 25.0, 7);
    CHECK(db.size() == 100);  // 25 per m^2 over a 2 m x 2 m area
    CHECK(db.header().n_t == 4);
    CHECK(db.header().n_c == 4);
    CHECK(db.header().center_frequency == scene.center_frequency);
    CHECK(db.header().bandwidth == scene.bandwidth);
    CHECK(db.header().scene_fingerprint == soc::scene_hash(scene));
    CHECK(db.header().seed == 7);
    CHECK(db.header().density == 25.0);
}

TEST_CASE("sampled positions lie inside the area at terminal height") {
    ScattererScene scene = test_scene();
    StaticSampleDb db = soc::sample_static_db(scene, 25.0, 3);
    for (std::size_t i = 0; i < db.size(); ++i) {
        CHECK(scene.ue_area.contains_xy(db.record(i).position));
        CHECK(db.record(i).position.z == scene.ue_area.height);
    }
}

TEST_CASE("sampling is deterministic in the seed and varies with it") {
    ScattererScene scene = test_scene();
    StaticSampleDb a = soc::sample_static_db(scene, 25.0, 11);
    StaticSampleDb b = soc::sample_static_db(scene, 25.0, 11);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.record(i).position == b.record(i).position);
        CHECK(soc::max_abs_diff(a.record(i).g, b.record(i).g) == 0.0);
    }
    StaticSampleDb c = soc::sample_static_db(scene, 25.0, 12);
    bool any_different = false;
    for (std::size_t i = 0; i < a.size() && !any_different; ++i)
        any_different = !(a.record(i).position == c.record(i).position);
    CHECK(any_different);
}

TEST_CASE("stored samples equal the closed-form channel at their positions") {
    ScattererScene scene = test_scene();
    StaticSampleDb db = soc::sample_static_db(scene, 25.0, 5);
    const soc::DftPair dft = soc::dft_matrices(scene.n_antennas, scene.n_subcarriers);
    for (std::size_t i = 0; i < db.size(); i += 9) {
        const CMat h = soc::static_cfr(soc::compute_paths(scene, db.record(i).position), scene);
        const CMat g = soc::to_angular_delay(h, dft);
        CHECK(soc::max_abs_diff(db.record(i).g, g) == 0.0);
    }
}

TEST_CASE("quadrant occupancy stays within three binomial sigmas") {
    ScattererScene scene = test_scene();
    scene.n_antennas = 2;
    scene.n_subcarriers = 2;
    scene.antenna_spacing = scene.wavelength() / 2.0;
    StaticSampleDb db = soc::sample_static_db(scene, 2500.0, 17);
    REQUIRE(db.size() == 10000);
    std::size_t in_quadrant = 0;
    for (std::size_t i = 0; i < db.size(); ++i) {
        const Vec3& p = db.record(i).position;
        if (p.x < 0.0 && p.y < 0.0) ++in_quadrant;
    }
    const double n = 10000.0;
    const double sigma = std::sqrt(n * 0.25 * 0.75);
    CHECK(std::abs(static_cast<double>(in_quadrant) - n * 0.25) <= 3.0 * sigma);
}

TEST_CASE("databases round trip through disk byte for byte") {
    ScattererScene scene = test_scene();
    StaticSampleDb db = soc::sample_static_db(scene, 10.0, 23);
    const std::string p1 = "db_roundtrip_a.socdb";
    const std::string p2 = "db_roundtrip_b.socdb";
    db.save(p1);
    StaticSampleDb back = StaticSampleDb::load(p1);
    back.save(p2);
    CHECK(read_file_bytes(p1) == read_file_bytes(p2));
    CHECK(back.size() == db.size());
    CHECK(back.header().scene_fingerprint == db.header().scene_fingerprint);
    for (std::size_t i = 0; i < db.size(); ++i) {
        CHECK(back.record(i).position == db.record(i).position);
        CHECK(soc::max_abs_diff(back.record(i).g, db.record(i).g) == 0.0);
    }
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("missing, truncated, and mislabeled database files are reported") {
    CHECK_THROWS_AS(StaticSampleDb::load("no_such_db.socdb"), soc::MissingFileError);

    const std::string path = "db_bad.socdb";
    {
        ScattererScene scene = test_scene();
        StaticSampleDb db = soc::sample_static_db(scene, 10.0, 1);
        db.save(path);
    }
    auto bytes = read_file_bytes(path);
    {
        std::ofstream os(path, std::ios::binary);
        os.write(bytes.data(), 20);  // header cut short
    }
    CHECK_THROWS_AS(StaticSampleDb::load(path), std::runtime_error);
    {
        std::ofstream os(path, std::ios::binary);
        os << "NOTDB1 garbage";
    }
    CHECK_THROWS_AS(StaticSampleDb::load(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("sampling validates density against the area") {
    ScattererScene scene = test_scene();
    CHECK_THROWS_AS(soc::sample_static_db(scene, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(soc::sample_static_db(scene, -2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(soc::sample_static_db(scene, 0.2, 1), std::invalid_argument);  // floor is 0
}

TEST_CASE("trajectories follow uniform linear motion inside the area") {
    ScattererScene scene = test_scene();
    TrajectoryDataset ds = soc::generate_trajectories(scene, 5, 8, 0.01, 1.0, 3.0, 31);
    REQUIRE(ds.trajectories.size() == 5);
    CHECK(ds.interval == 0.01);
    CHECK(ds.scene_fingerprint == soc::scene_hash(scene));
    for (const auto& trj : ds.trajectories) {
        REQUIRE(trj.steps.size() == 8);
        CHECK(trj.speed >= 1.0);
        CHECK(trj.speed <= 3.0);
        const Vec3 start = trj.steps[0].position;
        const Vec3 vel{trj.speed * std::cos(trj.direction), trj.speed * std::sin(trj.direction),
                       0.0};
        for (std::size_t k = 0; k < trj.steps.size(); ++k) {
            const auto& st = trj.steps[k];
            CHECK(st.time == doctest::Approx(0.01 * static_cast<double>(k)));
            const Vec3 expect = start + vel * st.time;
            CHECK((st.position - expect).norm() < 1e-12);
            CHECK(st.position.z == scene.ue_area.height);
            CHECK(scene.ue_area.contains_xy(st.position));
        }
    }
}

TEST_CASE("zero-speed trajectories stand still with a static channel") {
    ScattererScene scene = test_scene();
    TrajectoryDataset ds = soc::generate_trajectories(scene, 2, 6, 0.01, 0.0, 0.0, 37);
    for (const auto& trj : ds.trajectories) {
        CHECK(trj.speed == 0.0);
        const CMat h_static =
            soc::static_cfr(soc::compute_paths(scene, trj.steps[0].position), scene);
        for (const auto& st : trj.steps) {
            CHECK((st.position - trj.steps[0].position).norm() == 0.0);
            CHECK(soc::max_abs_diff(st.channel, trj.steps[0].channel) == 0.0);
            CHECK(soc::max_abs_diff(st.channel, h_static) < 1e-12);
        }
    }
}

TEST_CASE("trajectory channels equal the closed-form mobile channel") {
    ScattererScene scene = test_scene();
    TrajectoryDataset ds = soc::generate_trajectories(scene, 3, 4, 0.02, 2.0, 5.0, 41);
    for (const auto& trj : ds.trajectories) {
        for (const auto& st : trj.steps) {
            const soc::UeState ue{st.position, trj.speed, trj.direction};
            const CMat h = soc::mobile_cfr(soc::compute_paths(scene, st.position), ue, scene);
            CHECK(soc::max_abs_diff(st.channel, h) == 0.0);
        }
    }
}

TEST_CASE("trajectory generation is deterministic in the seed") {
    ScattererScene scene = test_scene();
    TrajectoryDataset a = soc::generate_trajectories(scene, 4, 5, 0.01, 1.0, 4.0, 43);
    TrajectoryDataset b = soc::generate_trajectories(scene, 4, 5, 0.01, 1.0, 4.0, 43);
    REQUIRE(a.trajectories.size() == b.trajectories.size());
    for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
        CHECK(a.trajectories[i].speed == b.trajectories[i].speed);
        CHECK(a.trajectories[i].direction == b.trajectories[i].direction);
        for (std::size_t k = 0; k < a.trajectories[i].steps.size(); ++k)
            CHECK(soc::max_abs_diff(a.trajectories[i].steps[k].channel,
                                    b.trajectories[i].steps[k].channel) == 0.0);
    }
}

TEST_CASE("trajectory datasets round trip through disk byte for byte") {
    ScattererScene scene = test_scene();
    TrajectoryDataset ds = soc::generate_trajectories(scene, 3, 4, 0.01, 1.0, 2.0, 47);
    const std::string p1 = "trj_roundtrip_a.soctrj";
    const std::string p2 = "trj_roundtrip_b.soctrj";
    ds.save(p1);
    TrajectoryDataset back = TrajectoryDataset::load(p1);
    back.save(p2);
    CHECK(read_file_bytes(p1) == read_file_bytes(p2));
    CHECK(back.interval == ds.interval);
    CHECK(back.seed == ds.seed);
    REQUIRE(back.trajectories.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.trajectories[i].speed == ds.trajectories[i].speed);
        for (std::size_t k = 0; k < ds.trajectories[i].steps.size(); ++k) {
            CHECK(back.trajectories[i].steps[k].position == ds.trajectories[i].steps[k].position);
            CHECK(soc::max_abs_diff(back.trajectories[i].steps[k].channel,
                                    ds.trajectories[i].steps[k].channel) == 0.0);
        }
    }
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    CHECK_THROWS_AS(TrajectoryDataset::load("no_such.soctrj"), soc::MissingFileError);
}

TEST_CASE("trajectory generation validates parameters and placement") {
    ScattererScene scene = test_scene();
    CHECK_THROWS_AS(soc::generate_trajectories(scene, 0, 5, 0.01, 1.0, 2.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(soc::generate_trajectories(scene, 1, 0, 0.01, 1.0, 2.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(soc::generate_trajectories(scene, 1, 5, 0.0, 1.0, 2.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(soc::generate_trajectories(scene, 1, 5, 0.01, 2.0, 1.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(soc::generate_trajectories(scene, 1, 5, 0.01, -1.0, 2.0, 1),
                    std::invalid_argument);
    // A 2 m x 2 m area cannot hold a 90 m displacement at any bearing.
    CHECK_THROWS_AS(soc::generate_trajectories(scene, 1, 10, 0.1, 100.0, 100.0, 1),
                    std::runtime_error);
}
