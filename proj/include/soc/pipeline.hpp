#pragma once

#include <string>
#include <vector>

#include "soc/baselines.hpp"
#include "soc/config.hpp"
#include "soc/dataset.hpp"
#include "soc/doppler.hpp"
#include "soc/ode.hpp"
#include "soc/positioning.hpp"
#include "soc/scgnet.hpp"

namespace soc {

/// Synthesizes a scene from the config's gen_* fields; scatterer draws are
/// seeded so identical configs produce identical scenes.
ScattererScene synthesize_scene(const RunConfig& cfg);

/// ode_step of 0 resolves to a tenth of the center wavelength.
OdeConfig make_ode_config(const RunConfig& cfg, double lambda_c);

DopplerConfig make_doppler_config(const RunConfig& cfg, const DbHeader& header);

struct PipelineResult {
    CMat g_mobile;  // predicted mobile angular-delay channel at t_next
    CMat g_static;  // static prediction at the extrapolated position
    IterationResult iteration;
    double integration_length = 0.0;  // meters integrated from the nearest sample
};

/// The full mobile prediction: localize and extract motion from the
/// measured sequence, integrate the static channel to the extrapolated
/// position, then re-apply the fitted Doppler.
PipelineResult predict_mobile(const StaticSampleDb& db, const Scgnet& scgnet,
                              const Positioner& positioner, const std::vector<CMat>& measured,
                              const std::vector<double>& times, double t_next,
                              const IterationConfig& it_cfg, const DopplerConfig& dop_cfg,
                              const OdeConfig& ode_cfg);

struct BenchmarkInputs {
    const StaticSampleDb* db = nullptr;
    const Scgnet* scgnet = nullptr;
    const Positioner* positioner = nullptr;
    const LstmBaseline* lstm = nullptr;
    const TrajectoryDataset* sequences = nullptr;
    IterationConfig it_cfg;
    DopplerConfig dop_cfg;
    OdeConfig ode_cfg;
    int ar_order = 7;
    int lstm_seq_len = 5;
    double density = 0.0;  // report column only
};

/// Evaluates the requested methods on every trajectory: the first L−1
/// steps are the measured history, the final step is the target. Throws
/// std::invalid_argument listing any artifact a method needs but was not
/// given. Methods: pipeline, nn_db, lstm, ar.
std::vector<BenchmarkRow> run_benchmark(const BenchmarkInputs& in,
                                        const std::vector<std::string>& methods);

}  // namespace soc
