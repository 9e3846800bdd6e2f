#include "soc/ode.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "soc/nn/adam.hpp"

namespace soc {

namespace {

/// Splits s into full steps of Δs plus a remainder, snapping away float dust
/// so that chained integrations over step-aligned lengths stay exact.
struct StepPlan {
    long full = 0;
    double remainder = 0.0;
};

StepPlan plan_steps(double s, const OdeConfig& cfg) {
    if (s < 0.0) throw std::invalid_argument("ode_solve: length must be >= 0");
    if (!(cfg.step > 0.0)) throw std::invalid_argument("ode_solve: step must be > 0");
    StepPlan p;
    p.full = static_cast<long>(std::floor(s / cfg.step));
    p.remainder = s - static_cast<double>(p.full) * cfg.step;
    if (p.remainder <= cfg.step * 1e-12) {
        p.remainder = 0.0;
    } else if (p.remainder >= cfg.step * (1.0 - 1e-12)) {
        ++p.full;
        p.remainder = 0.0;
    }
    const long total = p.full + (p.remainder > 0.0 ? 1 : 0);
    if (total > cfg.max_steps) {
        throw std::runtime_error("ode_solve: step budget exceeded (" + std::to_string(total) +
                                 " steps needed, max " + std::to_string(cfg.max_steps) + ")");
    }
    return p;
}

void euler_step(const FieldFn& field, std::vector<double>& y, double theta_m, double h) {
    const std::vector<double> k = field(y, theta_m);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * k[i];
}

void rk4_step(const FieldFn& field, std::vector<double>& y, double theta_m, double h) {
    const std::vector<double> k1 = field(y, theta_m);
    std::vector<double> tmp(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const std::vector<double> k2 = field(tmp, theta_m);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const std::vector<double> k3 = field(tmp, theta_m);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
    const std::vector<double> k4 = field(tmp, theta_m);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

}  // namespace

std::vector<double> ode_solve(const FieldFn& field, std::vector<double> g0, double theta_m,
                              double s, const OdeConfig& cfg) {
    const StepPlan plan = plan_steps(s, cfg);
    auto advance = [&](double h) {
        if (cfg.solver == Solver::kEuler) {
            euler_step(field, g0, theta_m, h);
        } else {
            rk4_step(field, g0, theta_m, h);
        }
        check_finite(g0, "ode_solve state");
    };
    for (long i = 0; i < plan.full; ++i) advance(cfg.step);
    if (plan.remainder > 0.0) advance(plan.remainder);
    return g0;
}

nn::Var ode_solve_tape(const Scgnet& net, nn::Tape& t, nn::Var g0, double theta_m, double s,
                       const OdeConfig& cfg) {
    const StepPlan plan = plan_steps(s, cfg);
    nn::Var y = g0;
    auto advance = [&](double h) {
        if (cfg.solver == Solver::kEuler) {
            nn::Var k = net.forward(t, y, theta_m);
            y = t.add_scaled(y, k, h);
        } else {
            nn::Var k1 = net.forward(t, y, theta_m);
            nn::Var k2 = net.forward(t, t.add_scaled(y, k1, 0.5 * h), theta_m);
            nn::Var k3 = net.forward(t, t.add_scaled(y, k2, 0.5 * h), theta_m);
            nn::Var k4 = net.forward(t, t.add_scaled(y, k3, h), theta_m);
            nn::Var sum = t.add(k1, k4);
            sum = t.add_scaled(sum, k2, 2.0);
            sum = t.add_scaled(sum, k3, 2.0);
            y = t.add_scaled(y, sum, h / 6.0);
        }
    };
    for (long i = 0; i < plan.full; ++i) advance(cfg.step);
    if (plan.remainder > 0.0) advance(plan.remainder);
    return y;
}

std::vector<TrainingPair> build_training_pairs(const StaticSampleDb& db, int z) {
    if (z < 1) throw std::invalid_argument("build_training_pairs: z must be >= 1");
    if (db.size() <= static_cast<std::size_t>(z)) {
        throw std::invalid_argument("build_training_pairs: database needs more than z samples");
    }
    std::vector<TrainingPair> pairs;
    pairs.reserve(db.size() * static_cast<std::size_t>(z));
    for (std::size_t i = 0; i < db.size(); ++i) {
        const Vec3& src = db.record(i).position;
        const auto neigh = db.k_nearest(src, static_cast<std::size_t>(z) + 1);
        int taken = 0;
        for (std::size_t idx : neigh) {
            if (idx == i) continue;
            if (taken == z) break;
            const Vec3 d = db.record(idx).position - src;
            TrainingPair p;
            p.source = i;
            p.target = idx;
            p.theta_m = std::atan2(d.y, d.x);
            p.s = d.norm();
            pairs.push_back(p);
            ++taken;
        }
    }
    return pairs;
}

double calibrate_input_scale(const StaticSampleDb& db) {
    double sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < db.size(); ++i) {
        const CMat& g = db.record(i).g;
        for (double v : g.re.data) sq += v * v;
        for (double v : g.im.data) sq += v * v;
        n += 2 * g.re.size();
    }
    if (n == 0 || !(sq > 0.0)) {
        throw std::invalid_argument("calibrate_input_scale: database has no signal energy");
    }
    return 1.0 / std::sqrt(sq / static_cast<double>(n));
}

LossTrace train_scgnet(const StaticSampleDb& db, Scgnet& net, const ScgnetTrainConfig& cfg) {
    const std::vector<TrainingPair> pairs = build_training_pairs(db, cfg.z);
    if (cfg.batch < 1 || cfg.steps < 0) {
        throw std::invalid_argument("train_scgnet: bad steps/batch");
    }
    if (cfg.calibrate_input_scale) net.set_input_scale(calibrate_input_scale(db));

    std::vector<std::vector<double>> flats;
    flats.reserve(db.size());
    for (std::size_t i = 0; i < db.size(); ++i) flats.push_back(flatten_planes(db.record(i).g));

    Rng rng = Rng::substream(cfg.seed, "scgnet-train");
    nn::AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    nn::Adam opt(net.params(), adam_cfg);
    nn::Tape tape(&net.params());

    LossTrace trace;
    trace.mse.reserve(static_cast<std::size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        net.params().zero_grads();
        double batch_mse = 0.0;
        for (int b = 0; b < cfg.batch; ++b) {
            const TrainingPair& pair = pairs[rng.index(pairs.size())];
            tape.reset();
            nn::Var g0 = tape.leaf(flats[pair.source]);
            nn::Var pred = ode_solve_tape(net, tape, g0, pair.theta_m, pair.s, cfg.ode);
            nn::Var loss = tape.mse_against(pred, flats[pair.target]);
            tape.backward(loss, 1.0 / static_cast<double>(cfg.batch));
            batch_mse += tape.scalar(loss);
        }
        batch_mse /= static_cast<double>(cfg.batch);
        if (!std::isfinite(batch_mse)) {
            throw std::runtime_error("train_scgnet: loss diverged at step " +
                                     std::to_string(step));
        }
        opt.step();
        trace.mse.push_back(batch_mse);
    }
    return trace;
}

CMat predict_static(const StaticSampleDb& db, const Scgnet& net, const Vec3& target_pos,
                    const OdeConfig& cfg) {
    if (db.size() == 0) throw std::invalid_argument("predict_static: empty database");
    const DbRecord& start = db.nearest(target_pos);
    const Vec3 d = target_pos - start.position;
    const double s = d.norm();
    if (s == 0.0) return start.g;
    const double theta_m = std::atan2(d.y, d.x);
    const int n_t = net.config().n_t;
    const int n_c = net.config().n_c;
    FieldFn field = [&](const std::vector<double>& y, double th) {
        const CMat out = net.forward(unflatten_planes(y, n_t, n_c), th);
        return flatten_planes(out);
    };
    const std::vector<double> g = ode_solve(field, flatten_planes(start.g), theta_m, s, cfg);
    return unflatten_planes(g, n_t, n_c);
}

}  // namespace soc
