#include "soc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "soc/angular_delay.hpp"
#include "soc/io.hpp"
#include "soc/nn/adam.hpp"
#include "soc/scgnet.hpp"

namespace soc {

double nmse(const CMat& pred, const CMat& truth) {
    const double denom = sq_norm(truth);
    if (!(denom > 0.0)) throw std::invalid_argument("nmse: truth has zero norm");
    return sq_error(pred, truth) / denom;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty input");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid - 1),
                     v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (v[mid - 1] + hi);
}

const CMat& nn_db_baseline(const StaticSampleDb& db, const Vec3& target_pos) {
    return db.nearest(target_pos).g;
}

std::size_t lstm_baseline_param_count(const LstmBaselineConfig& cfg) {
    const auto io_size = static_cast<std::size_t>(2 * cfg.n_t * cfg.n_c);
    return nn::lstm_params(static_cast<int>(io_size), cfg.hidden) +
           static_cast<std::size_t>(cfg.hidden) * io_size + io_size;
}

LstmBaseline::LstmBaseline(LstmBaselineConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    if (cfg_.n_t < 1 || cfg_.n_c < 1 || cfg_.hidden < 1) {
        throw std::invalid_argument("lstm baseline: dims must be >= 1");
    }
    Rng rng = Rng::substream(seed, "lstm-baseline-init");
    const int io_size = 2 * cfg_.n_t * cfg_.n_c;
    cell_ = nn::LstmCell(params_, io_size, cfg_.hidden, rng);
    nn::Tensor w({static_cast<std::size_t>(io_size), static_cast<std::size_t>(cfg_.hidden)});
    nn::glorot_fill(w, cfg_.hidden, io_size, rng);
    head_w_ = params_.add(std::move(w));
    head_b_ = params_.add(nn::Tensor({static_cast<std::size_t>(io_size)}));
}

nn::Var LstmBaseline::forward(nn::Tape& t, const std::vector<const CMat*>& sequence) const {
    if (sequence.empty()) throw std::invalid_argument("lstm baseline: empty sequence");
    nn::Var h = t.leaf_zeros(cfg_.hidden);
    nn::Var c = t.leaf_zeros(cfg_.hidden);
    for (const CMat* g : sequence) {
        if (g->rows() != static_cast<std::size_t>(cfg_.n_t) ||
            g->cols() != static_cast<std::size_t>(cfg_.n_c)) {
            throw std::invalid_argument("lstm baseline: channel dims mismatch");
        }
        std::vector<double> x = flatten_planes(*g);
        for (double& v : x) v *= cfg_.input_scale;
        auto [hn, cn] = cell_.step(t, t.leaf(x), h, c);
        h = hn;
        c = cn;
    }
    return t.dense_affine(head_w_, head_b_, h);
}

CMat LstmBaseline::predict(const std::vector<CMat>& sequence) const {
    // Forward-only tape; parameter mutation never happens without backward().
    nn::Tape t(const_cast<nn::ParamStore*>(&params_));
    std::vector<const CMat*> ptrs;
    ptrs.reserve(sequence.size());
    for (const CMat& g : sequence) ptrs.push_back(&g);
    nn::Var out = forward(t, ptrs);
    const auto v = t.value(out);
    check_finite(v, "lstm baseline forward");
    return unflatten_planes(std::vector<double>(v.begin(), v.end()), cfg_.n_t, cfg_.n_c);
}

void LstmBaseline::set_input_scale(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("lstm baseline: input_scale must be > 0");
    cfg_.input_scale = s;
}

namespace {

std::vector<std::uint8_t> encode_arch(const LstmBaselineConfig& cfg) {
    std::ostringstream os(std::ios::binary);
    io::write_u32(os, static_cast<std::uint32_t>(cfg.n_t));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.n_c));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.hidden));
    io::write_f64(os, cfg.input_scale);
    const std::string s = os.str();
    return {s.begin(), s.end()};
}

LstmBaselineConfig decode_arch(const std::vector<std::uint8_t>& blob) {
    std::istringstream is(std::string(blob.begin(), blob.end()), std::ios::binary);
    LstmBaselineConfig cfg;
    cfg.n_t = static_cast<int>(io::read_u32(is, "lstm n_t"));
    cfg.n_c = static_cast<int>(io::read_u32(is, "lstm n_c"));
    cfg.hidden = static_cast<int>(io::read_u32(is, "lstm hidden"));
    cfg.input_scale = io::read_f64(is, "lstm input_scale");
    return cfg;
}

}  // namespace

void LstmBaseline::save(const std::string& path) const {
    nn::save_checkpoint(path, nn::ArchKind::kLstmBaseline, encode_arch(cfg_), params_);
}

LstmBaseline LstmBaseline::from_checkpoint(const nn::Checkpoint& ckpt) {
    if (ckpt.kind != nn::ArchKind::kLstmBaseline) {
        throw std::runtime_error("checkpoint does not hold an LSTM baseline");
    }
    LstmBaseline net(decode_arch(ckpt.arch_blob), 0);
    nn::restore_params(ckpt, net.params_);
    return net;
}

LstmBaseline LstmBaseline::load(const std::string& path) {
    return from_checkpoint(nn::load_checkpoint(path));
}

std::vector<double> train_lstm_baseline(const TrajectoryDataset& data, LstmBaseline& net,
                                        const LstmBaselineTrainConfig& cfg) {
    if (cfg.seq_len < 1) throw std::invalid_argument("train_lstm_baseline: seq_len must be >= 1");
    if (cfg.batch < 1 || cfg.steps < 0) {
        throw std::invalid_argument("train_lstm_baseline: bad steps/batch");
    }
    const DftPair dft = dft_matrices(net.config().n_t, net.config().n_c);

    // Precompute angular-delay channels and enumerate training windows.
    std::vector<std::vector<CMat>> g_seqs;
    struct Window {
        std::size_t traj;
        std::size_t start;
    };
    std::vector<Window> windows;
    g_seqs.reserve(data.trajectories.size());
    for (std::size_t ti = 0; ti < data.trajectories.size(); ++ti) {
        const auto& steps = data.trajectories[ti].steps;
        std::vector<CMat> gs;
        gs.reserve(steps.size());
        for (const auto& st : steps) gs.push_back(to_angular_delay(st.channel, dft));
        g_seqs.push_back(std::move(gs));
        if (steps.size() >= static_cast<std::size_t>(cfg.seq_len) + 1) {
            for (std::size_t s = 0; s + cfg.seq_len < steps.size(); ++s) {
                windows.push_back({ti, s});
            }
        }
    }
    if (windows.empty()) {
        throw std::invalid_argument("train_lstm_baseline: no window of seq_len+1 steps fits");
    }

    if (cfg.calibrate_input_scale) {
        double sq = 0.0;
        std::size_t n = 0;
        for (const auto& gs : g_seqs) {
            for (const CMat& g : gs) {
                for (double v : g.re.data) sq += v * v;
                for (double v : g.im.data) sq += v * v;
                n += 2 * g.re.size();
            }
        }
        if (sq > 0.0) net.set_input_scale(1.0 / std::sqrt(sq / static_cast<double>(n)));
    }

    Rng rng = Rng::substream(cfg.seed, "lstm-baseline-train");
    nn::AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    nn::Adam opt(net.params(), adam_cfg);
    nn::Tape tape(&net.params());

    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        net.params().zero_grads();
        double batch_mse = 0.0;
        for (int b = 0; b < cfg.batch; ++b) {
            const Window& w = windows[rng.index(windows.size())];
            const auto& gs = g_seqs[w.traj];
            std::vector<const CMat*> input;
            input.reserve(static_cast<std::size_t>(cfg.seq_len));
            for (int k = 0; k < cfg.seq_len; ++k) {
                input.push_back(&gs[w.start + static_cast<std::size_t>(k)]);
            }
            tape.reset();
            nn::Var out = net.forward(tape, input);
            const std::vector<double> target =
                flatten_planes(gs[w.start + static_cast<std::size_t>(cfg.seq_len)]);
            nn::Var loss = tape.mse_against(out, target);
            tape.backward(loss, 1.0 / static_cast<double>(cfg.batch));
            batch_mse += tape.scalar(loss);
        }
        batch_mse /= static_cast<double>(cfg.batch);
        if (!std::isfinite(batch_mse)) {
            throw std::runtime_error("train_lstm_baseline: loss diverged at step " +
                                     std::to_string(step));
        }
        opt.step();
        trace.push_back(batch_mse);
    }
    return trace;
}

namespace {

/// Gaussian elimination with partial pivoting; returns false when the
/// system is numerically singular.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double cand = std::abs(a[static_cast<std::size_t>(r) * n + col]);
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best < 1e-12) return false;
        if (pivot != col) {
            for (int c = col; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(pivot) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
            }
            std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
        }
        const double diag = a[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r) * n + col] / diag;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) {
                a[static_cast<std::size_t>(r) * n + c] -=
                    f * a[static_cast<std::size_t>(col) * n + c];
            }
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) {
            s -= a[static_cast<std::size_t>(r) * n + c] * b[static_cast<std::size_t>(c)];
        }
        b[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r) * n + r];
    }
    return true;
}

}  // namespace

ArResult ar_baseline(const std::vector<CMat>& sequence, int order) {
    if (order < 1) throw std::invalid_argument("ar_baseline: order must be >= 1");
    const auto len = sequence.size();
    if (len < static_cast<std::size_t>(order) + 1) {
        throw std::invalid_argument("ar_baseline: sequence length must be >= order + 1");
    }
    const std::size_t rows = sequence[0].rows();
    const std::size_t cols = sequence[0].cols();
    for (const CMat& g : sequence) {
        if (g.rows() != rows || g.cols() != cols) {
            throw std::invalid_argument("ar_baseline: inconsistent dims in sequence");
        }
    }
    const std::size_t plane = rows * cols;
    const auto n_eq = len - static_cast<std::size_t>(order);
    const auto ord = static_cast<std::size_t>(order);

    ArResult result;
    result.prediction = CMat(rows, cols);

    std::vector<double> series(len);
    std::vector<double> ata(ord * ord);
    std::vector<double> atb(ord);
    auto entry = [&](std::size_t t, std::size_t e) {
        return e < plane ? sequence[t].re.data[e] : sequence[t].im.data[e - plane];
    };
    for (std::size_t e = 0; e < 2 * plane; ++e) {
        for (std::size_t t = 0; t < len; ++t) series[t] = entry(t, e);
        // Normal equations for y_t = Σ_j a_j y_{t-j}, t = order..len-1.
        std::fill(ata.begin(), ata.end(), 0.0);
        std::fill(atb.begin(), atb.end(), 0.0);
        for (std::size_t t = ord; t < len; ++t) {
            for (std::size_t i = 0; i < ord; ++i) {
                const double ri = series[t - 1 - i];
                atb[i] += ri * series[t];
                for (std::size_t j = 0; j < ord; ++j) ata[i * ord + j] += ri * series[t - 1 - j];
            }
        }
        double value;
        std::vector<double> a = ata;
        std::vector<double> coeff = atb;
        if (n_eq >= ord && solve_linear(a, coeff, order)) {
            value = 0.0;
            for (std::size_t j = 0; j < ord; ++j) value += coeff[j] * series[len - 1 - j];
        } else {
            value = series[len - 1];
            result.used_fallback = true;
        }
        if (e < plane) {
            result.prediction.re.data[e] = value;
        } else {
            result.prediction.im.data[e - plane] = value;
        }
    }
    return result;
}

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string format_benchmark_csv(const std::vector<BenchmarkRow>& rows) {
    std::ostringstream os;
    os << "method,density,speed,seq_len,sample_id,nmse\n";
    for (const auto& r : rows) {
        os << r.method << ',' << fmt_g(r.density) << ',' << fmt_g(r.speed) << ',' << r.seq_len
           << ',' << r.sample_id << ',' << fmt_g(r.nmse) << '\n';
    }
    return os.str();
}

void write_benchmark_csv(const std::string& path, const std::vector<BenchmarkRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open CSV for writing: " + path);
    os << format_benchmark_csv(rows);
    if (!os) throw std::runtime_error("short write to CSV: " + path);
}

void write_loss_csv(const std::string& path, const std::vector<double>& mse) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open CSV for writing: " + path);
    os << "step,mse\n";
    for (std::size_t i = 0; i < mse.size(); ++i) os << i << ',' << fmt_g(mse[i]) << '\n';
    if (!os) throw std::runtime_error("short write to CSV: " + path);
}

}  // namespace soc
