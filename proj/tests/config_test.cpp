#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "soc/common.hpp"
#include "soc/config.hpp"
#include "soc/scene.hpp"

using soc::CombineMode;
using soc::PositionerInputMode;
using soc::RunConfig;
using soc::ScattererScene;
using soc::Solver;

namespace {

ScattererScene sample_scene() {
    ScattererScene s;
    s.bs_position = {0.0, -40.0, 10.0};
    s.array_axis = {0.0, 1.0, 0.0};
    s.n_antennas = 8;
    s.n_subcarriers = 16;
    s.include_los = false;
    s.center_frequency = 3.5e9;
    s.bandwidth = 1e8;
    s.antenna_spacing = s.wavelength() / 2.0;
    s.ue_area = {-10.0, 10.0, -5.0, 5.0, 1.5};
    s.scatterers.push_back({{8.0, 3.0, 4.0}, 0.9});
    s.scatterers.push_back({{-6.0, 10.0, 2.0}, 1.25});
    return s;
}

}  // namespace

TEST_CASE("default config is valid and round trips through text") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    const std::string text = soc::format_config(c);
    RunConfig back = soc::parse_config(text);
    CHECK(soc::format_config(back) == text);
    CHECK(back.seed == c.seed);
    CHECK(back.density == c.density);
    CHECK(back.solver == Solver::kRk4);
    CHECK(back.combine_mode == CombineMode::kCorrectedAnalytic);
    CHECK(back.pos_input_mode == PositionerInputMode::kColumnPerCell);
    CHECK(back.scg_scattering_hidden == std::vector<int>{256, 768, 512, 256});
    CHECK(back.scg_direction_hidden == std::vector<int>{512, 256});
}

TEST_CASE("non-default values survive the round trip") {
    RunConfig c;
    c.scene = "other.socscene";
    c.out_dir = "run42";
    c.db = "custom.socdb";
    c.seed = 99;
    c.density = 12.5;
    c.solver = Solver::kEuler;
    c.combine_mode = CombineMode::kSumDifference;
    c.pos_input_mode = PositionerInputMode::kFullMatrixPerCell;
    c.scg_scattering_hidden = {32, 16};
    c.scg_direction_hidden = {8};
    c.ode_step = 0.004;
    c.traj_speed_min = 5.0;
    c.traj_speed_max = 5.0;
    c.gen_include_los = false;
    c.gen_n_scatterers = 3;
    RunConfig back = soc::parse_config(soc::format_config(c));
    CHECK(back.scene == "other.socscene");
    CHECK(back.out_dir == "run42");
    CHECK(back.db == "custom.socdb");
    CHECK(back.seed == 99);
    CHECK(back.density == 12.5);
    CHECK(back.solver == Solver::kEuler);
    CHECK(back.combine_mode == CombineMode::kSumDifference);
    CHECK(back.pos_input_mode == PositionerInputMode::kFullMatrixPerCell);
    CHECK(back.scg_scattering_hidden == std::vector<int>{32, 16});
    CHECK(back.scg_direction_hidden == std::vector<int>{8});
    CHECK(back.ode_step == 0.004);
    CHECK(back.gen_include_los == false);
    CHECK(soc::format_config(back) == soc::format_config(c));
}

TEST_CASE("artifact paths default into the output directory") {
    RunConfig c;
    c.out_dir = "run";
    CHECK(c.db_path() == "run/db.socdb");
    CHECK(c.sequences_path() == "run/sequences.soctrj");
    CHECK(c.scgnet_model_path() == "run/scgnet.socnn");
    CHECK(c.positioner_model_path() == "run/positioner.socnn");
    CHECK(c.lstm_model_path() == "run/lstm.socnn");
    c.out_dir = "run/";  // trailing slash is not doubled
    CHECK(c.db_path() == "run/db.socdb");
    c.db = "elsewhere.socdb";
    CHECK(c.db_path() == "elsewhere.socdb");
}

TEST_CASE("parser rejects unknown keys, bad enums, and missing header") {
    CHECK_THROWS_AS(soc::parse_config("not a config\n"), std::invalid_argument);
    CHECK_THROWS_AS(soc::parse_config("socconf v1\nno_such_key 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(soc::parse_config("socconf v1\nsolver dopri5\n"), std::invalid_argument);
    CHECK_THROWS_AS(soc::parse_config("socconf v1\ncombine_mode other\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(soc::parse_config("socconf v1\npos_input_mode other\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(soc::parse_config("socconf v1\nseed abc\n"), std::invalid_argument);
    CHECK_NOTHROW(soc::parse_config("socconf v1\n# a comment\n\nseed 3\n"));
}

TEST_CASE("validation names the offending field") {
    RunConfig c;
    c.density = 0.0;
    try {
        c.validate();
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("density") != std::string::npos);
    }
    c = RunConfig{};
    c.traj_length = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.train_fraction = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.ode_step = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.gen_n_scatterers = 0;
    c.gen_include_los = false;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("config files round trip through disk") {
    RunConfig c;
    c.seed = 1234;
    c.out_dir = "elsewhere";
    const std::string path = "config_roundtrip.socconf";
    soc::save_config(path, c);
    RunConfig back = soc::load_config(path);
    CHECK(soc::format_config(back) == soc::format_config(c));
    std::remove(path.c_str());
    CHECK_THROWS_AS(soc::load_config("no_such.socconf"), soc::MissingFileError);
}

TEST_CASE("scene text round trips exactly") {
    ScattererScene s = sample_scene();
    const std::string text = soc::format_scene(s);
    ScattererScene back = soc::parse_scene(text);
    CHECK(soc::format_scene(back) == text);
    CHECK(back.n_antennas == 8);
    CHECK(back.n_subcarriers == 16);
    CHECK(back.include_los == false);
    CHECK(back.scatterers.size() == 2);
    CHECK(back.scatterers[1].reflectivity == 1.25);
    CHECK(back.ue_area.height == 1.5);
    CHECK(back.array_axis == soc::Vec3{0.0, 1.0, 0.0});
}

TEST_CASE("scene files round trip through disk") {
    ScattererScene s = sample_scene();
    const std::string path = "scene_roundtrip.socscene";
    soc::save_scene(path, s);
    ScattererScene back = soc::load_scene(path);
    CHECK(soc::format_scene(back) == soc::format_scene(s));
    std::remove(path.c_str());
    CHECK_THROWS_AS(soc::load_scene("no_such.socscene"), soc::MissingFileError);
}

TEST_CASE("omitted antenna spacing defaults to half the center wavelength") {
    ScattererScene s = sample_scene();
    std::string text = soc::format_scene(s);
    // Drop the antenna_spacing line entirely.
    const auto pos = text.find("antenna_spacing");
    const auto end = text.find('\n', pos);
    text.erase(pos, end - pos + 1);
    ScattererScene back = soc::parse_scene(text);
    CHECK(back.antenna_spacing == doctest::Approx(0.5 * back.wavelength()));
}

TEST_CASE("scene validation pins the antenna spacing and geometry") {
    ScattererScene s = sample_scene();
    s.antenna_spacing *= 1.01;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = sample_scene();
    s.array_axis = {1.0, 1.0, 0.0};  // not unit length
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = sample_scene();
    s.n_antennas = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = sample_scene();
    s.ue_area.x_max = s.ue_area.x_min;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = sample_scene();
    s.scatterers.clear();  // include_los is false in the sample
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = sample_scene();
    s.scatterers[0].reflectivity = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("scene parsing cross-checks the declared scatterer count") {
    ScattererScene s = sample_scene();
    std::string text = soc::format_scene(s);
    const auto pos = text.find("scatterers 2");
    text.replace(pos, 12, "scatterers 3");
    CHECK_THROWS_AS(soc::parse_scene(text), std::invalid_argument);
    CHECK_THROWS_AS(soc::parse_scene("socscene v2\n"), std::invalid_argument);
    CHECK_THROWS_AS(soc::parse_scene(soc::format_scene(s) + "mystery 1\n"),
                    std::invalid_argument);
}

TEST_CASE("the scene fingerprint tracks content, not identity") {
    ScattererScene a = sample_scene();
    ScattererScene b = sample_scene();
    CHECK(soc::scene_hash(a) == soc::scene_hash(b));
    b.scatterers[0].reflectivity = 0.91;
    CHECK(soc::scene_hash(a) != soc::scene_hash(b));
    ScattererScene c = soc::parse_scene(soc::format_scene(a));
    CHECK(soc::scene_hash(a) == soc::scene_hash(c));
}
