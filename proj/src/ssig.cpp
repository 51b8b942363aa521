#include "fpsim/ssig.hpp"

#include <algorithm>
#include <cmath>

#include "fpsim/errors.hpp"
#include "fpsim/util.hpp"

namespace fpsim {

double ssig(double miou_val, double nged_val, const SsigParams& params) {
    if (!(params.gamma > 0.0)) throw OutOfRange("ssig: gamma must be > 0");
    if (!(miou_val >= 0.0 && miou_val <= 1.0)) {
        throw OutOfRange("ssig: miou outside [0,1]");
    }
    if (!(nged_val >= 0.0 && nged_val <= 1.0)) {
        throw OutOfRange("ssig: nged outside [0,1]");
    }
    return (miou_val + (1.0 - std::pow(nged_val, params.gamma))) / 2.0;
}

GammaGrid GammaGrid::parse(const std::string& text) {
    std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) throw Error("gamma grid must be lo:hi:step, got: " + text);
    GammaGrid grid;
    grid.lo = std::stod(parts[0]);
    grid.hi = std::stod(parts[1]);
    grid.step = std::stod(parts[2]);
    return grid;
}

std::vector<double> GammaGrid::values() const {
    if (!(step > 0.0) || !(lo > 0.0) || hi < lo) {
        throw Error("gamma grid requires 0 < lo <= hi and step > 0");
    }
    std::vector<double> out;
    for (int k = 0;; ++k) {
        double value = lo + k * step;
        if (value > hi + step * 1e-9) break;
        out.push_back(value);
    }
    return out;
}

namespace {

std::vector<double> normalized_histogram(std::span<const double> values, int bins) {
    std::vector<double> density(bins, 0.0);
    for (double v : values) {
        int bin = static_cast<int>(v * bins);
        bin = std::clamp(bin, 0, bins - 1);
        density[bin] += 1.0;
    }
    for (double& d : density) d /= static_cast<double>(values.size());
    return density;
}

double histogram_intersection(const std::vector<double>& p, const std::vector<double>& q) {
    double overlap = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) overlap += std::min(p[i], q[i]);
    return overlap;
}

} // namespace

GammaCalibration calibrate_gamma(std::span<const double> miou_samples,
                                 std::span<const double> nged_samples, const GammaGrid& grid,
                                 int bins) {
    if (miou_samples.empty() || nged_samples.empty()) {
        throw EmptyInput("calibrate_gamma: sample lists must be non-empty");
    }
    std::vector<double> gammas = grid.values();
    if (gammas.empty()) throw EmptyInput("calibrate_gamma: empty gamma grid");
    if (bins < 1) throw Error("calibrate_gamma: bins must be >= 1");

    std::vector<double> miou_hist = normalized_histogram(miou_samples, bins);

    GammaCalibration best{gammas.front(), -1.0};
    std::vector<double> transformed(nged_samples.size());
    for (double gamma : gammas) {
        for (std::size_t i = 0; i < nged_samples.size(); ++i) {
            transformed[i] = 1.0 - std::pow(nged_samples[i], gamma);
        }
        double overlap = histogram_intersection(miou_hist, normalized_histogram(transformed, bins));
        if (overlap > best.overlap) { // strict: ties keep the smallest gamma
            best = {gamma, overlap};
        }
    }
    return best;
}

} // namespace fpsim
