// Plot-data output: CSV/JSON text with 17-significant-digit numbers,
// written atomically (temp file + rename).

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qclock/core.hpp"

namespace qclock::io {

// Shortest representation carrying 17 significant digits.
std::string format_full(double x);

void atomic_write(const std::filesystem::path& path, std::string_view content);

// Trajectory CSV with columns t,u,v,w,pe.
std::string trajectory_csv(std::span<const double> times, std::span<const BlochVector> states);
void write_trajectory_csv(const std::filesystem::path& path, std::span<const double> times,
                          std::span<const BlochVector> states);

}  // namespace qclock::io
