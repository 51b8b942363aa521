#ifndef FPSIM_PNG_IO_HPP
#define FPSIM_PNG_IO_HPP

#include <filesystem>

#include "fpsim/core.hpp"

namespace fpsim {

/// Reads an 8-bit single-channel PNG; palette indices (or gray values) are
/// the category codes. Throws UnreadableImage on anything else.
SemanticImage read_indexed_png(const std::filesystem::path& file);

/// Writes the raster as an 8-bit palette PNG with a deterministic palette.
void write_indexed_png(const std::filesystem::path& file, const SemanticImage& image);

} // namespace fpsim

#endif
