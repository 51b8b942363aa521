#ifndef FPSIM_UTIL_HPP
#define FPSIM_UTIL_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fpsim {

/// 0 requests auto-detection (hardware concurrency).
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, count) across a pool of worker threads. Blocks
/// until done; the first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Incremental FNV-1a 64-bit hash, used for stage input fingerprints.
class Fnv1a {
public:
    Fnv1a& update(const void* data, std::size_t size);
    Fnv1a& update(std::string_view text);
    Fnv1a& update(std::uint64_t value);
    Fnv1a& update_file(const std::filesystem::path& file); // throws on unreadable file
    std::uint64_t digest() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 1469598103934665603ULL;
};

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

} // namespace fpsim

#endif
