#include "soc/scgnet.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "soc/common.hpp"
#include "soc/io.hpp"

namespace soc {

std::vector<int> ScgnetConfig::scattering_widths() const {
    std::vector<int> w;
    w.push_back(2 * map_size());
    w.insert(w.end(), scattering_hiddens.begin(), scattering_hiddens.end());
    w.push_back(2 * map_size());
    return w;
}

std::vector<int> ScgnetConfig::direction_widths() const {
    std::vector<int> w;
    w.push_back(2 * n_t);
    w.insert(w.end(), direction_hiddens.begin(), direction_hiddens.end());
    w.push_back(map_size());
    return w;
}

std::size_t scgnet_param_count(const ScgnetConfig& cfg) {
    return nn::dense_stack_params(cfg.scattering_widths()) +
           nn::dense_stack_params(cfg.direction_widths());
}

std::vector<double> direction_embedding(double theta_m, int n_t) {
    if (!std::isfinite(theta_m)) throw std::invalid_argument("direction_embedding: non-finite angle");
    std::vector<double> v(static_cast<std::size_t>(2 * n_t));
    const double s = std::sin(theta_m);
    const double c = std::cos(theta_m);
    for (int k = 0; k < n_t; ++k) {
        v[static_cast<std::size_t>(2 * k)] = s;
        v[static_cast<std::size_t>(2 * k + 1)] = c;
    }
    return v;
}

CMat combine_maps(const CMat& c1, const CMat& c2, const CMat& dm, const CMat& g,
                  CombineMode mode) {
    require_same_shape(c1, g, "combine_maps");
    require_same_shape(c2, g, "combine_maps");
    require_same_shape(dm, g, "combine_maps");
    CMat out(g.rows(), g.cols());
    for (std::size_t i = 0; i < g.re.size(); ++i) {
        const double a = c1.re.data[i];
        const double b = c2.re.data[i];
        const double d = dm.re.data[i];
        const double gr = g.re.data[i];
        const double gi = g.im.data[i];
        if (mode == CombineMode::kCorrectedAnalytic) {
            out.re.data[i] = (a * gr - b * gi) * d;
            out.im.data[i] = (b * gr + a * gi) * d;
        } else {
            out.re.data[i] = (a * gr + b * gi) * d;
            out.im.data[i] = (a * gr - b * gi) * d;
        }
    }
    return out;
}

Scgnet::Scgnet(ScgnetConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)) {
    if (cfg_.n_t < 1 || cfg_.n_c < 1) throw std::invalid_argument("scgnet: dims must be >= 1");
    if (!(cfg_.input_scale > 0.0)) throw std::invalid_argument("scgnet: input_scale must be > 0");
    Rng rng = Rng::substream(seed, "scgnet-init");
    scattering_ = nn::Mlp(params_, cfg_.scattering_widths(), nn::Activation::kTanh,
                          nn::Activation::kIdentity, rng);
    direction_ = nn::Mlp(params_, cfg_.direction_widths(), nn::Activation::kTanh,
                         nn::Activation::kIdentity, rng);
    // Physics prior: start the second coefficient map at ρ so the phase
    // term opens at the right magnitude instead of near zero.
    const int last = scattering_.layer_count() - 1;
    nn::Tensor& b = params_.value(scattering_.bias_id(last));
    const auto n = static_cast<std::size_t>(cfg_.map_size());
    for (std::size_t i = 0; i < n; ++i) b[n + i] = cfg_.rho;
}

nn::Var Scgnet::forward(nn::Tape& t, nn::Var g_flat, double theta_m) const {
    const int n = cfg_.map_size();
    if (g_flat.size != 2 * n) throw std::invalid_argument("scgnet: input size mismatch");
    nn::Var scaled = t.scale(g_flat, cfg_.input_scale);
    nn::Var c12 = scattering_.forward(t, scaled);
    nn::Var c1 = t.slice(c12, 0, n);
    nn::Var c2 = t.slice(c12, n, n);
    nn::Var emb = t.leaf(direction_embedding(theta_m, cfg_.n_t));
    nn::Var dm = direction_.forward(t, emb);
    nn::Var g_re = t.slice(g_flat, 0, n);
    nn::Var g_im = t.slice(g_flat, n, n);
    nn::Var out_re;
    nn::Var out_im;
    if (cfg_.combine_mode == CombineMode::kCorrectedAnalytic) {
        out_re = t.mul(t.sub(t.mul(c1, g_re), t.mul(c2, g_im)), dm);
        out_im = t.mul(t.add(t.mul(c2, g_re), t.mul(c1, g_im)), dm);
    } else {
        out_re = t.mul(t.add(t.mul(c1, g_re), t.mul(c2, g_im)), dm);
        out_im = t.mul(t.sub(t.mul(c1, g_re), t.mul(c2, g_im)), dm);
    }
    return t.concat(out_re, out_im);
}

CMat Scgnet::forward(const CMat& g, double theta_m) const {
    if (g.rows() != static_cast<std::size_t>(cfg_.n_t) ||
        g.cols() != static_cast<std::size_t>(cfg_.n_c)) {
        throw std::invalid_argument("scgnet: channel dims mismatch");
    }
    // Forward-only tape; parameter mutation never happens without backward().
    nn::Tape t(const_cast<nn::ParamStore*>(&params_));
    const std::vector<double> flat = flatten_planes(g);
    nn::Var out = forward(t, t.leaf(flat), theta_m);
    const auto v = t.value(out);
    check_finite(v, "scgnet forward");
    return unflatten_planes(std::vector<double>(v.begin(), v.end()), cfg_.n_t, cfg_.n_c);
}

void Scgnet::set_input_scale(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("scgnet: input_scale must be > 0");
    cfg_.input_scale = s;
}

namespace {

std::vector<std::uint8_t> encode_arch(const ScgnetConfig& cfg) {
    std::ostringstream os(std::ios::binary);
    io::write_u32(os, static_cast<std::uint32_t>(cfg.n_t));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.n_c));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.scattering_hiddens.size()));
    for (int h : cfg.scattering_hiddens) io::write_u32(os, static_cast<std::uint32_t>(h));
    io::write_u32(os, static_cast<std::uint32_t>(cfg.direction_hiddens.size()));
    for (int h : cfg.direction_hiddens) io::write_u32(os, static_cast<std::uint32_t>(h));
    io::write_u8(os, static_cast<std::uint8_t>(cfg.combine_mode));
    io::write_f64(os, cfg.rho);
    io::write_f64(os, cfg.input_scale);
    const std::string s = os.str();
    return {s.begin(), s.end()};
}

ScgnetConfig decode_arch(const std::vector<std::uint8_t>& blob) {
    std::istringstream is(std::string(blob.begin(), blob.end()), std::ios::binary);
    ScgnetConfig cfg;
    cfg.n_t = static_cast<int>(io::read_u32(is, "scgnet n_t"));
    cfg.n_c = static_cast<int>(io::read_u32(is, "scgnet n_c"));
    cfg.scattering_hiddens.assign(io::read_u32(is, "scattering hidden count"), 0);
    for (auto& h : cfg.scattering_hiddens) h = static_cast<int>(io::read_u32(is, "scattering hidden"));
    cfg.direction_hiddens.assign(io::read_u32(is, "direction hidden count"), 0);
    for (auto& h : cfg.direction_hiddens) h = static_cast<int>(io::read_u32(is, "direction hidden"));
    const auto mode = io::read_u8(is, "combine mode");
    if (mode > 1) throw std::runtime_error("scgnet checkpoint: unknown combine mode");
    cfg.combine_mode = static_cast<CombineMode>(mode);
    cfg.rho = io::read_f64(is, "rho");
    cfg.input_scale = io::read_f64(is, "input_scale");
    return cfg;
}

}  // namespace

void Scgnet::save(const std::string& path) const {
    nn::save_checkpoint(path, nn::ArchKind::kScgnet, encode_arch(cfg_), params_);
}

Scgnet Scgnet::from_checkpoint(const nn::Checkpoint& ckpt) {
    if (ckpt.kind != nn::ArchKind::kScgnet) {
        throw std::runtime_error("checkpoint does not hold a gradient network");
    }
    Scgnet net(decode_arch(ckpt.arch_blob), 0);
    nn::restore_params(ckpt, net.params_);
    return net;
}

Scgnet Scgnet::load(const std::string& path) {
    return from_checkpoint(nn::load_checkpoint(path));
}

std::vector<double> flatten_planes(const CMat& g) {
    std::vector<double> v;
    v.reserve(2 * g.re.size());
    v.insert(v.end(), g.re.data.begin(), g.re.data.end());
    v.insert(v.end(), g.im.data.begin(), g.im.data.end());
    return v;
}

CMat unflatten_planes(const std::vector<double>& v, int n_t, int n_c) {
    const auto n = static_cast<std::size_t>(n_t) * static_cast<std::size_t>(n_c);
    if (v.size() != 2 * n) throw std::invalid_argument("unflatten_planes: size mismatch");
    CMat g(static_cast<std::size_t>(n_t), static_cast<std::size_t>(n_c));
    std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n), g.re.data.begin());
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(n), v.end(), g.im.data.begin());
    return g;
}

}  // namespace soc
