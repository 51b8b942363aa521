#include "fpsim/config.hpp"

#include <fstream>

#include "fpsim/errors.hpp"
#include "fpsim/util.hpp"

namespace fpsim {

Config Config::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config: " + file.string());

    Config config;
    std::filesystem::path base = file.parent_path();
    auto resolve = [&](const std::string& value) {
        std::filesystem::path p(value);
        return p.is_absolute() ? p : base / p;
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        try {
            if (key == "dataset_dir") config.dataset_dir = resolve(value);
            else if (key == "cache_dir") config.cache_dir = resolve(value);
            else if (key == "category_map") config.category_map = resolve(value);
            else if (key == "gamma") config.gamma = std::stod(value);
            else if (key == "n") config.n = std::stoi(value);
            else if (key == "tau_dedup") config.tau_dedup = std::stod(value);
            else if (key == "ged_budget") config.ged_budget = std::stoi(value);
            else if (key == "beam_width") config.beam_width = std::stoi(value);
            else if (key == "door_reach") config.door_reach = std::stoi(value);
            else if (key == "adjacency_gap") config.adjacency_gap = std::stoi(value);
            else if (key == "min_room_area") config.min_room_area = std::stoi(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "workers") config.workers = std::stoi(value);
            else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(line_no) + ": bad value for '" + key + "'");
        }
    }
    return config;
}

void Config::validate() const {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    if (n < 1) throw ConfigError("n must be >= 1");
    if (!(tau_dedup > 0.0 && tau_dedup <= 1.0)) throw ConfigError("tau_dedup must be in (0,1]");
    if (ged_budget < 1) throw ConfigError("ged_budget must be >= 1");
    if (beam_width < 1) throw ConfigError("beam_width must be >= 1");
    if (door_reach < 0) throw ConfigError("door_reach must be >= 0");
    if (adjacency_gap < 0) throw ConfigError("adjacency_gap must be >= 0");
    if (min_room_area < 1) throw ConfigError("min_room_area must be >= 1");
    if (workers < 0) throw ConfigError("workers must be >= 0");

    if (dataset_dir.empty() || !std::filesystem::is_directory(dataset_dir)) {
        throw ConfigError("dataset_dir does not exist: " + dataset_dir.string());
    }
    if (category_map.empty() || !std::filesystem::is_regular_file(category_map)) {
        throw ConfigError("category_map does not exist: " + category_map.string());
    }
    if (cache_dir.empty()) throw ConfigError("cache_dir is required");
    std::filesystem::create_directories(cache_dir);
}

} // namespace fpsim
