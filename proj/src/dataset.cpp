#include "soc/dataset.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "soc/angular_delay.hpp"
#include "soc/common.hpp"
#include "soc/io.hpp"
#include "soc/oracle.hpp"

namespace soc {

namespace {

constexpr const char* kDbMagic = "SOCDB1";
constexpr const char* kTrjMagic = "SOCTR1";

void write_cmat(std::ostream& os, const CMat& m) {
    io::write_bytes(os, m.re.data.data(), m.re.data.size() * sizeof(double));
    io::write_bytes(os, m.im.data.data(), m.im.data.size() * sizeof(double));
}

CMat read_cmat(std::istream& is, std::size_t rows, std::size_t cols, const char* what) {
    CMat m(rows, cols);
    io::read_bytes(is, m.re.data.data(), m.re.data.size() * sizeof(double), what);
    io::read_bytes(is, m.im.data.data(), m.im.data.size() * sizeof(double), what);
    return m;
}

void write_vec3(std::ostream& os, const Vec3& v) {
    io::write_f64(os, v.x);
    io::write_f64(os, v.y);
    io::write_f64(os, v.z);
}

Vec3 read_vec3(std::istream& is, const char* what) {
    Vec3 v;
    v.x = io::read_f64(is, what);
    v.y = io::read_f64(is, what);
    v.z = io::read_f64(is, what);
    return v;
}

std::vector<Vec3> positions_of(const std::vector<DbRecord>& records) {
    std::vector<Vec3> p;
    p.reserve(records.size());
    for (const auto& r : records) p.push_back(r.position);
    return p;
}

}  // namespace

StaticSampleDb::StaticSampleDb(DbHeader header, std::vector<DbRecord> records)
    : header_(header), records_(std::move(records)), index_(positions_of(records_)) {
    for (const auto& r : records_) {
        if (r.g.rows() != header_.n_t || r.g.cols() != header_.n_c) {
            throw std::invalid_argument("StaticSampleDb: record dims disagree with header");
        }
    }
}

std::size_t StaticSampleDb::nearest_index(const Vec3& pos) const {
    if (records_.empty()) throw std::invalid_argument("StaticSampleDb: empty database");
    return index_.nearest(pos);
}

std::vector<std::size_t> StaticSampleDb::k_nearest(const Vec3& pos, std::size_t k) const {
    if (records_.empty()) throw std::invalid_argument("StaticSampleDb: empty database");
    return index_.k_nearest(pos, k);
}

void StaticSampleDb::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open database for writing: " + path);
    os.write(kDbMagic, 6);
    io::write_u32(os, header_.n_t);
    io::write_u32(os, header_.n_c);
    io::write_f64(os, header_.center_frequency);
    io::write_f64(os, header_.bandwidth);
    io::write_u64(os, header_.scene_fingerprint);
    io::write_u64(os, header_.seed);
    io::write_f64(os, header_.density);
    io::write_u64(os, records_.size());
    for (const auto& r : records_) {
        write_vec3(os, r.position);
        write_cmat(os, r.g);
    }
    if (!os) throw std::runtime_error("short write to database: " + path);
}

StaticSampleDb StaticSampleDb::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw MissingFileError("cannot open database: " + path);
    io::expect_magic(is, kDbMagic, "database");
    DbHeader h;
    h.n_t = io::read_u32(is, "db n_t");
    h.n_c = io::read_u32(is, "db n_c");
    h.center_frequency = io::read_f64(is, "db center_frequency");
    h.bandwidth = io::read_f64(is, "db bandwidth");
    h.scene_fingerprint = io::read_u64(is, "db scene fingerprint");
    h.seed = io::read_u64(is, "db seed");
    h.density = io::read_f64(is, "db density");
    const auto count = io::read_u64(is, "db record count");
    std::vector<DbRecord> records;
    records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        DbRecord r;
        r.position = read_vec3(is, "db record position");
        r.g = read_cmat(is, h.n_t, h.n_c, "db record channel");
        records.push_back(std::move(r));
    }
    return StaticSampleDb(h, std::move(records));
}

StaticSampleDb sample_static_db(const ScattererScene& scene, double density,
                                std::uint64_t seed) {
    scene.validate();
    if (!(density > 0.0)) throw std::invalid_argument("sample_static_db: density must be > 0");
    const double area = (scene.ue_area.x_max - scene.ue_area.x_min) *
                        (scene.ue_area.y_max - scene.ue_area.y_min);
    if (!(area > 0.0)) throw std::invalid_argument("sample_static_db: zero-area scene");
    const auto n = static_cast<std::size_t>(std::floor(density * area));
    if (n == 0) throw std::invalid_argument("sample_static_db: density too low for the area");

    Rng rng = Rng::substream(seed, "db-sampling");
    const DftPair dft = dft_matrices(scene.n_antennas, scene.n_subcarriers);
    std::vector<DbRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        DbRecord r;
        r.position = {rng.uniform(scene.ue_area.x_min, scene.ue_area.x_max),
                      rng.uniform(scene.ue_area.y_min, scene.ue_area.y_max),
                      scene.ue_area.height};
        const CMat h = static_cfr(compute_paths(scene, r.position), scene);
        r.g = to_angular_delay(h, dft);
        records.push_back(std::move(r));
    }
    DbHeader header;
    header.n_t = static_cast<std::uint32_t>(scene.n_antennas);
    header.n_c = static_cast<std::uint32_t>(scene.n_subcarriers);
    header.center_frequency = scene.center_frequency;
    header.bandwidth = scene.bandwidth;
    header.scene_fingerprint = scene_hash(scene);
    header.seed = seed;
    header.density = density;
    return StaticSampleDb(header, std::move(records));
}

void TrajectoryDataset::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open trajectory file for writing: " + path);
    os.write(kTrjMagic, 6);
    io::write_u32(os, n_t);
    io::write_u32(os, n_c);
    io::write_f64(os, center_frequency);
    io::write_f64(os, bandwidth);
    io::write_u64(os, scene_fingerprint);
    io::write_u64(os, seed);
    io::write_f64(os, interval);
    io::write_u64(os, trajectories.size());
    for (const auto& trj : trajectories) {
        io::write_f64(os, trj.speed);
        io::write_f64(os, trj.direction);
        io::write_u32(os, static_cast<std::uint32_t>(trj.steps.size()));
        for (const auto& step : trj.steps) {
            io::write_f64(os, step.time);
            write_vec3(os, step.position);
            write_cmat(os, step.channel);
        }
    }
    if (!os) throw std::runtime_error("short write to trajectory file: " + path);
}

TrajectoryDataset TrajectoryDataset::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw MissingFileError("cannot open trajectory file: " + path);
    io::expect_magic(is, kTrjMagic, "trajectories");
    TrajectoryDataset ds;
    ds.n_t = io::read_u32(is, "trj n_t");
    ds.n_c = io::read_u32(is, "trj n_c");
    ds.center_frequency = io::read_f64(is, "trj center_frequency");
    ds.bandwidth = io::read_f64(is, "trj bandwidth");
    ds.scene_fingerprint = io::read_u64(is, "trj scene fingerprint");
    ds.seed = io::read_u64(is, "trj seed");
    ds.interval = io::read_f64(is, "trj interval");
    const auto count = io::read_u64(is, "trj count");
    ds.trajectories.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Trajectory trj;
        trj.speed = io::read_f64(is, "trj speed");
        trj.direction = io::read_f64(is, "trj direction");
        const auto len = io::read_u32(is, "trj length");
        trj.steps.reserve(len);
        for (std::uint32_t k = 0; k < len; ++k) {
            TrajectoryStep step;
            step.time = io::read_f64(is, "trj step time");
            step.position = read_vec3(is, "trj step position");
            step.channel = read_cmat(is, ds.n_t, ds.n_c, "trj step channel");
            trj.steps.push_back(std::move(step));
        }
        ds.trajectories.push_back(std::move(trj));
    }
    return ds;
}

TrajectoryDataset generate_trajectories(const ScattererScene& scene, int count, int length,
                                        double interval_s, double speed_lo, double speed_hi,
                                        std::uint64_t seed) {
    scene.validate();
    if (count < 1 || length < 1) {
        throw std::invalid_argument("generate_trajectories: count and length must be >= 1");
    }
    if (!(interval_s > 0.0)) throw std::invalid_argument("generate_trajectories: interval must be > 0");
    if (speed_lo < 0.0 || speed_hi < speed_lo) {
        throw std::invalid_argument("generate_trajectories: bad speed range");
    }

    Rng rng = Rng::substream(seed, "trajectories");
    TrajectoryDataset ds;
    ds.n_t = static_cast<std::uint32_t>(scene.n_antennas);
    ds.n_c = static_cast<std::uint32_t>(scene.n_subcarriers);
    ds.center_frequency = scene.center_frequency;
    ds.bandwidth = scene.bandwidth;
    ds.scene_fingerprint = scene_hash(scene);
    ds.seed = seed;
    ds.interval = interval_s;
    ds.trajectories.reserve(static_cast<std::size_t>(count));

    constexpr int kMaxRetries = 10000;
    for (int i = 0; i < count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
            const Vec3 start{rng.uniform(scene.ue_area.x_min, scene.ue_area.x_max),
                             rng.uniform(scene.ue_area.y_min, scene.ue_area.y_max),
                             scene.ue_area.height};
            const double bearing = rng.uniform(-kPi, kPi);
            const double speed = rng.uniform(speed_lo, speed_hi);
            const Vec3 step_vec{speed * std::cos(bearing), speed * std::sin(bearing), 0.0};
            const Vec3 end = start + step_vec * (interval_s * static_cast<double>(length - 1));
            if (!scene.ue_area.contains_xy(end)) continue;

            Trajectory trj;
            trj.speed = speed;
            trj.direction = bearing;
            trj.steps.reserve(static_cast<std::size_t>(length));
            for (int k = 0; k < length; ++k) {
                TrajectoryStep st;
                st.time = interval_s * static_cast<double>(k);
                st.position = start + step_vec * st.time;
                const UeState ue{st.position, speed, bearing};
                st.channel = mobile_cfr(compute_paths(scene, st.position), ue, scene);
                trj.steps.push_back(std::move(st));
            }
            ds.trajectories.push_back(std::move(trj));
            placed = true;
        }
        if (!placed) {
            throw std::runtime_error(
                "generate_trajectories: could not place a trajectory inside the UE area");
        }
    }
    return ds;
}

}  // namespace soc
