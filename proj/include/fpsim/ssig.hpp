#ifndef FPSIM_SSIG_HPP
#define FPSIM_SSIG_HPP

#include <span>
#include <string>
#include <vector>

namespace fpsim {

struct SsigParams {
    double gamma = 0.4; // weight of the graph term; must be > 0
};

/// (miou + (1 - nged^gamma)) / 2. Monotone up in miou, down in nged.
/// Throws OutOfRange when an input leaves [0,1] or gamma <= 0.
double ssig(double miou_val, double nged_val, const SsigParams& params = {});

/// Inclusive gamma sweep lo, lo+step, ..., hi.
struct GammaGrid {
    double lo = 0.1;
    double hi = 1.0;
    double step = 0.05;

    static GammaGrid parse(const std::string& text); // "lo:hi:step"
    std::vector<double> values() const;
};

struct GammaCalibration {
    double gamma_star = 0.0;
    double overlap = 0.0; // histogram intersection at gamma_star, in [0,1]
};

/// Finds the gamma whose transformed nged distribution, 1 - nged^gamma, has
/// maximal histogram intersection with the miou distribution (equal bins on
/// [0,1]). Ties resolve to the smallest gamma.
GammaCalibration calibrate_gamma(std::span<const double> miou_samples,
                                 std::span<const double> nged_samples, const GammaGrid& grid,
                                 int bins = 100);

} // namespace fpsim

#endif
