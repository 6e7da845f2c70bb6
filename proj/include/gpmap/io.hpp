#pragma once

#include <string>
#include <vector>

namespace gpmap {

// Shortest decimal form that round-trips the double exactly ("%.17g" fallback), always
// C-locale. All persisted numbers go through this so outputs are byte-reproducible.
std::string format_double(double v);

// Write-to-temp-then-rename so readers (and resume logic) never see partial files.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

void ensure_dir(const std::string& path);

// Grid CSV: one row per grid row, comma-separated round-trip doubles.
std::string grid_to_csv(const std::vector<double>& values, int resolution);
std::vector<double> grid_from_csv(const std::string& csv, int* resolution_out = nullptr);

// Binary 8-bit PGM (P5); values clamped to [0,1] and scaled to 0..255. Row 0 of the
// grid is the top image row.
std::string grid_to_pgm(const std::vector<double>& values, int resolution);

}  // namespace gpmap
