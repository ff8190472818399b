#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

namespace betasparse::experiments {

/// Writes an 8-bit grayscale PNG of a row-major width x height image,
/// min-max normalised, plus "<path>.meta.txt" holding the normalisation
/// constants and the given config echo. Row 0 of the data is the bottom of
/// the image.
void write_grayscale_png(const std::filesystem::path& path, std::span<const double> values,
                         std::size_t width, std::size_t height, const std::string& config_echo);

/// Renders a 1D profile as a bar plot (white background, dark bars).
void write_profile_png(const std::filesystem::path& path, std::span<const double> values,
                       const std::string& config_echo, std::size_t height = 200);

}  // namespace betasparse::experiments
