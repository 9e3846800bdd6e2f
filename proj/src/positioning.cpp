#include "soc/positioning.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "soc/angular_delay.hpp"
#include "soc/io.hpp"
#include "soc/scgnet.hpp"

namespace soc {

std::size_t positioner_param_count(const PositionerConfig& cfg) {
    return nn::lstm_params(cfg.step_input_size(), cfg.hidden1) +
           nn::lstm_params(cfg.hidden1, cfg.hidden2) +
           static_cast<std::size_t>(cfg.hidden2) * 3 + 3;
}

Positioner::Positioner(PositionerConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    if (cfg_.n_t < 1 || cfg_.n_c < 1 || cfg_.hidden1 < 1 || cfg_.hidden2 < 1) {
        throw std::invalid_argument("positioner: dims must be >= 1");
    }
    Rng rng = Rng::substream(seed, "positioner-init");
    layer1_ = nn::LstmCell(params_, cfg_.step_input_size(), cfg_.hidden1, rng);
    layer2_ = nn::LstmCell(params_, cfg_.hidden1, cfg_.hidden2, rng);
    nn::Tensor w({3, static_cast<std::size_t>(cfg_.hidden2)});
    nn::glorot_fill(w, cfg_.hidden2, 3, rng);
    head_w_ = params_.add(std::move(w));
    head_b_ = params_.add(nn::Tensor({3}));
}

nn::Var Positioner::forward(nn::Tape& t, const CMat& g) const {
    if (g.rows() != static_cast<std::size_t>(cfg_.n_t) ||
        g.cols() != static_cast<std::size_t>(cfg_.n_c)) {
        throw std::invalid_argument("positioner: channel dims mismatch");
    }
    nn::Var h1 = t.leaf_zeros(cfg_.hidden1);
    nn::Var c1 = t.leaf_zeros(cfg_.hidden1);
    nn::Var h2 = t.leaf_zeros(cfg_.hidden2);
    nn::Var c2 = t.leaf_zeros(cfg_.hidden2);

    std::vector<double> x;
    const double sc = cfg_.input_scale;
    for (int l = 0; l < cfg_.n_c; ++l) {
        if (cfg_.input_mode == PositionerInputMode::kColumnPerCell) {
            x.assign(static_cast<std::size_t>(2 * cfg_.n_t), 0.0);
            for (int k = 0; k < cfg_.n_t; ++k) {
                x[static_cast<std::size_t>(k)] =
                    sc * g.re(static_cast<std::size_t>(k), static_cast<std::size_t>(l));
                x[static_cast<std::size_t>(cfg_.n_t + k)] =
                    sc * g.im(static_cast<std::size_t>(k), static_cast<std::size_t>(l));
            }
        } else if (l == 0) {
            x = flatten_planes(g);
            for (double& v : x) v *= sc;
        }
        nn::Var xin = t.leaf(x);
        auto [h1n, c1n] = layer1_.step(t, xin, h1, c1);
        h1 = h1n;
        c1 = c1n;
        auto [h2n, c2n] = layer2_.step(t, h1, h2, c2);
        h2 = h2n;
        c2 = c2n;
    }
    return t.dense_affine(head_w_, head_b_, h2);
}

Vec3 Positioner::position(const CMat& g) const {
    // Forward-only tape; parameter mutation never happens without backward().
    nn::Tape t(const_cast<nn::ParamStore*>(&params_));
    nn::Var out = forward(t, g);
    const auto v = t.value(out);
    check_finite(v, "positioner forward");
    return {v[0], v[1], v[2]};
}

void Positioner::set_input_scale(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("positioner: input_scale must be > 0");
    cfg_.input_scale = s;
}

void Positioner::set_head_bias(const Vec3& b) {
    nn::Tensor& t = params_.value(head_b_);
    t[0] = b.x;
    t[1] = b.y;
    t[2] = b.z;
}

namespace {

std::vector<std::uint8_t> encode_arch(const PositionerConfig& cfg) {
    std::ostringstream os(std::ios::binary);
    io::write_u32(os, static_cast<std::uint32_t>(cfg.n_t));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.n_c));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.hidden1));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.hidden2));
    io::write_u8(os, static_cast<std::uint8_t>(cfg.input_mode));
    io::write_f64(os, cfg.input_scale);
    const std::string s = os.str();
    return {s.begin(), s.end()};
}

PositionerConfig decode_arch(const std::vector<std::uint8_t>& blob) {
    std::istringstream is(std::string(blob.begin(), blob.end()), std::ios::binary);
    PositionerConfig cfg;
    cfg.n_t = static_cast<int>(io::read_u32(is, "positioner n_t"));
    cfg.n_c = static_cast<int>(io::read_u32(is, "positioner n_c"));
    cfg.hidden1 = static_cast<int>(io::read_u32(is, "positioner hidden1"));
    cfg.hidden2 = static_cast<int>(io::read_u32(is, "positioner hidden2"));
    const auto mode = io::read_u8(is, "positioner input mode");
    if (mode > 1) throw std::runtime_error("positioner checkpoint: unknown input mode");
    cfg.input_mode = static_cast<PositionerInputMode>(mode);
    cfg.input_scale = io::read_f64(is, "positioner input_scale");
    return cfg;
}

}  // namespace

void Positioner::save(const std::string& path) const {
    nn::save_checkpoint(path, nn::ArchKind::kPositioner, encode_arch(cfg_), params_);
}

Positioner Positioner::from_checkpoint(const nn::Checkpoint& ckpt) {
    if (ckpt.kind != nn::ArchKind::kPositioner) {
        throw std::runtime_error("checkpoint does not hold a positioner");
    }
    Positioner net(decode_arch(ckpt.arch_blob), 0);
    nn::restore_params(ckpt, net.params_);
    return net;
}

Positioner Positioner::load(const std::string& path) {
    return from_checkpoint(nn::load_checkpoint(path));
}

SplitIndices split_db(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction <= 1.0)) {
        throw std::invalid_argument("split_db: train_fraction must be in (0, 1]");
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng = Rng::substream(seed, "db-split");
    rng.shuffle(idx);
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(n)));
    SplitIndices split;
    split.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.holdout.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return split;
}

PositionerTrainResult train_positioner(const StaticSampleDb& db, Positioner& net,
                                       const PositionerTrainConfig& cfg) {
    if (db.size() < 1) throw std::invalid_argument("train_positioner: empty database");
    if (cfg.batch < 1 || cfg.steps < 0) {
        throw std::invalid_argument("train_positioner: bad steps/batch");
    }
    PositionerTrainResult result;
    result.split = split_db(db.size(), cfg.train_fraction, cfg.seed);
    const auto& train_idx = result.split.train;
    if (train_idx.empty()) throw std::invalid_argument("train_positioner: empty training split");

    if (cfg.calibrate_input_scale) {
        double sq = 0.0;
        std::size_t n = 0;
        for (std::size_t i : train_idx) {
            const CMat& g = db.record(i).g;
            for (double v : g.re.data) sq += v * v;
            for (double v : g.im.data) sq += v * v;
            n += 2 * g.re.size();
        }
        if (sq > 0.0) net.set_input_scale(1.0 / std::sqrt(sq / static_cast<double>(n)));
    }
    // Heads start at the centroid of the training positions so early
    // gradients fit residuals, not the absolute offset of the area.
    Vec3 mean{};
    for (std::size_t i : train_idx) mean = mean + db.record(i).position;
    net.set_head_bias(mean * (1.0 / static_cast<double>(train_idx.size())));

    Rng rng = Rng::substream(cfg.seed, "positioner-train");
    nn::AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    nn::Adam opt(net.params(), adam_cfg);
    nn::Tape tape(&net.params());

    result.mse.reserve(static_cast<std::size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        net.params().zero_grads();
        double batch_mse = 0.0;
        for (int b = 0; b < cfg.batch; ++b) {
            const DbRecord& rec = db.record(train_idx[rng.index(train_idx.size())]);
            tape.reset();
            nn::Var out = net.forward(tape, rec.g);
            const double target[3] = {rec.position.x, rec.position.y, rec.position.z};
            nn::Var loss = tape.mse_against(out, std::span<const double>(target, 3));
            tape.backward(loss, 1.0 / static_cast<double>(cfg.batch));
            batch_mse += tape.scalar(loss);
        }
        batch_mse /= static_cast<double>(cfg.batch);
        if (!std::isfinite(batch_mse)) {
            throw std::runtime_error("train_positioner: loss diverged at step " +
                                     std::to_string(step));
        }
        opt.step();
        result.mse.push_back(batch_mse);
    }
    return result;
}

LinearFit least_squares_velocity(const std::vector<Vec3>& positions,
                                 const std::vector<double>& times) {
    if (positions.size() != times.size()) {
        throw std::invalid_argument("least_squares_velocity: length mismatch");
    }
    if (positions.size() < 2) {
        throw std::invalid_argument("least_squares_velocity: need at least 2 samples");
    }
    const auto n = static_cast<double>(times.size());
    double t_mean = 0.0;
    for (double t : times) t_mean += t;
    t_mean /= n;
    double stt = 0.0;
    for (double t : times) stt += (t - t_mean) * (t - t_mean);
    if (!(stt > 0.0)) {
        throw std::invalid_argument("least_squares_velocity: all times identical");
    }
    Vec3 x_mean{};
    for (const Vec3& p : positions) x_mean = x_mean + p;
    x_mean = x_mean * (1.0 / n);
    Vec3 stx{};
    for (std::size_t i = 0; i < positions.size(); ++i) {
        stx = stx + (positions[i] - x_mean) * (times[i] - t_mean);
    }
    LinearFit fit;
    fit.v = stx * (1.0 / stt);
    fit.sigma = x_mean - fit.v * t_mean;
    return fit;
}

IterationResult iterate_position(const Positioner& net, const std::vector<CMat>& channels,
                                 const std::vector<double>& times, double t_next,
                                 const IterationConfig& cfg, const DopplerConfig& doppler_cfg) {
    if (channels.size() != times.size()) {
        throw std::invalid_argument("iterate_position: sequence length mismatch");
    }
    if (channels.size() < 2) {
        throw std::invalid_argument("iterate_position: need a sequence of >= 2 channels");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("iterate_position: times must be strictly increasing");
        }
    }
    if (!(cfg.eta > 0.0)) throw std::invalid_argument("iterate_position: eta must be > 0");
    if (cfg.max_iterations < 1) {
        throw std::invalid_argument("iterate_position: max_iterations must be >= 1");
    }

    const DftPair dft = dft_matrices(doppler_cfg.n_t, doppler_cfg.n_c);
    std::vector<CMat> g_seq;
    g_seq.reserve(channels.size());
    for (const CMat& h : channels) g_seq.push_back(to_angular_delay(h, dft));

    auto position_all = [&](const std::vector<CMat>& seq) {
        std::vector<Vec3> pos;
        pos.reserve(seq.size());
        for (const CMat& g : seq) pos.push_back(net.position(g));
        return pos;
    };

    IterationResult result;
    result.positions = position_all(g_seq);
    LinearFit fit = least_squares_velocity(result.positions, times);

    // Refinement always runs at least once; each pass eliminates the
    // previously fitted Doppler from the current channel iterates.
    for (int it = 0; it < cfg.max_iterations; ++it) {
        const double v_u = std::hypot(fit.v.x, fit.v.y);
        const double theta_v = std::atan2(fit.v.y, fit.v.x);
        const CMat elim = elimination_matrix(v_u, theta_v, doppler_cfg);
        for (CMat& g : g_seq) g = remove_doppler(g, elim);
        result.positions = position_all(g_seq);
        const LinearFit next = least_squares_velocity(result.positions, times);
        const double delta = (next.v - fit.v).norm();
        fit = next;
        result.delta_v.push_back(delta);
        result.iterations = it + 1;
        if (delta < cfg.eta) {
            result.converged = true;
            break;
        }
    }
    result.fit = fit;
    result.predicted_position = fit.v * t_next + fit.sigma;
    return result;
}

}  // namespace soc
