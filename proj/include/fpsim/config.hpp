#ifndef FPSIM_CONFIG_HPP
#define FPSIM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "fpsim/extract.hpp"

namespace fpsim {

/// Pipeline configuration. Loaded from a plain key = value file with '#'
/// comments; CLI flags override file values.
struct Config {
    std::filesystem::path dataset_dir;
    std::filesystem::path cache_dir;
    std::filesystem::path category_map;

    double gamma = 0.4;
    int n = 50;
    double tau_dedup = 0.87;
    int ged_budget = 12;
    int beam_width = 64;
    int door_reach = 2;
    int adjacency_gap = 6;
    int min_room_area = 4;
    std::uint64_t seed = 0;
    int workers = 0; // 0 = auto

    static Config load(const std::filesystem::path& file);
    /// Range checks plus path existence; creates cache_dir if missing.
    void validate() const;

    ExtractionParams extraction_params() const {
        return ExtractionParams{door_reach, adjacency_gap, min_room_area};
    }
};

} // namespace fpsim

#endif
