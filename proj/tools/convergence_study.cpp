// Regenerates data/convergence_fixture.json.
#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "semiwave/solver.hpp"

using namespace semiwave;
using nlohmann::ordered_json;

namespace {

RunConfig nls_config(int N, int sigma, const std::string& data)
{
    RunConfig cfg;
    cfg.params.equation = "NLS";
    cfg.params.sigma = sigma;
    cfg.params.p = 2;
    cfg.params.m = 2;
    cfg.N = N;
    cfg.R_outer = 8;
    cfg.T_final = 1;
    cfg.initial_data = data;
    cfg.monitors = {"T11.row1", "T11.row2"};
    return cfg;
}

double drift_of(const RunResult& r, const std::string& law)
{
    for (const DriftRecord& d : r.drift)
        if (d.law == law) return d.drift;
    throw std::logic_error("no drift for " + law);
}

bool blows_up(double amplitude, int N)
{
    RunConfig cfg = nls_config(N, 1, std::to_string(static_cast<long>(std::lround(amplitude * 1000))) + "/1000*exp(-r^2)");
    cfg.monitors.clear();
    return !run(cfg).completed();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Convergence study for the radial solver"};
    std::string out = "data/convergence_fixture.json";
    app.add_option("--out", out);
    CLI11_PARSE(app, argc, argv);

    ordered_json fx;
    ordered_json levels = ordered_json::array();
    std::vector<double> charge, energy;
    for (int N : {128, 256, 512, 1024}) {
        RunResult r = run(nls_config(N, -1, "exp(-r^2)"));
        charge.push_back(drift_of(r, "T11.row1"));
        energy.push_back(drift_of(r, "T11.row2"));
        levels.push_back({{"N", N}, {"steps", r.trajectory.steps}, {"charge_drift", charge.back()},
                          {"energy_drift", energy.back()}});
        std::cerr << "N=" << N << " charge " << charge.back() << " energy " << energy.back() << "\n";
    }
    fx["case"] = {{"equation", "NLS"}, {"sigma", -1}, {"p", 2}, {"m", 2}, {"R_outer", 8},
                  {"T_final", 1}, {"dt_factor", 0.25}, {"initial_data", "exp(-r^2)"}};
    fx["levels"] = levels;
    ordered_json ratios = ordered_json::array();
    for (std::size_t k = 1; k < energy.size(); ++k) ratios.push_back(energy[k] / energy[k - 1]);
    fx["energy_ratios"] = ratios;
    fx["ratio_bound"] = 1.0 / 3.5;
    fx["ratio_levels"] = {256, 512, 1024};
    fx["bounds"] = {{"charge_drift", 1e-6}, {"energy_drift", 1e-4}};

    RunResult focus = run(nls_config(512, 1, "5*exp(-r^2)"));
    RunResult defocus = run(nls_config(512, -1, "5*exp(-r^2)"));
    double lo = 0.5, hi = 5.0;
    while (hi - lo > 0.01) {
        const double mid = 0.5 * (lo + hi);
        (blows_up(mid, 256) ? hi : lo) = mid;
    }
    std::cerr << "focusing blowup at " << focus.trajectory.blowup_time << ", threshold amplitude in [" << lo << ", "
              << hi << "]\n";
    fx["blowup"] = {{"amplitude", 5},
                    {"focusing_blowup_time", focus.trajectory.blowup_time},
                    {"defocusing_completed", defocus.completed()},
                    {"threshold_amplitude_N256", {lo, hi}}};

    RunConfig conf = nls_config(1024, -1, "exp(-r^2 + i*r^2/4)");
    conf.params.m = 3;
    conf.params.p = 1;
    conf.R_outer = 16;
    conf.monitors = {"T11.row2", "T11.row5", "T11.row6", "T11.row5:corrected", "T11.row6:corrected"};
    RunResult c2 = run(conf);
    conf.params.spatial_order = 4;
    RunResult c4 = run(conf);
    auto drifts = [](const RunResult& r) {
        ordered_json j;
        for (const DriftRecord& d : r.drift) j[d.law] = d.drift;
        return j;
    };
    fx["conformal_case"] = {{"p", 1}, {"m", 3}, {"N", 1024}, {"R_outer", 16},
                            {"initial_data", "exp(-r^2 + i*r^2/4)"},
                            {"spatial_order_2", drifts(c2)}, {"spatial_order_4", drifts(c4)}};

    std::ofstream(out) << fx.dump(2) << "\n";
    std::cerr << "wrote " << out << "\n";
    return 0;
}
