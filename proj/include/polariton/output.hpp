#pragma once

#include <string>
#include <vector>

#include "polariton/config.hpp"
#include "polariton/observables.hpp"

namespace polariton {

/// Full round-trip precision (17 significant digits, scientific).
std::string format_full(double x);

/// Read a points CSV with mandatory header "x,y,z".
std::vector<Vec3> read_points_csv(const std::string& path);

/// Modes dataset: one row per solved mode.
void write_modes_csv(const std::string& path, const RunConfig& cfg, const SpectralReport& report);

/// Field map: one row per point x mode with the complex 3-vector split into
/// six reals; JSON sidecar carries the metadata.
void write_field_map_csv(const std::string& path, const RunConfig& cfg, const SpectralGrid& grid,
                         const FieldModeMap& map);
void write_field_map_sidecar(const std::string& path, const RunConfig& cfg,
                             const SpectralGrid& grid, const FieldModeMap& map);

/// Run manifest (config echo, version, timings; the only file carrying a
/// timestamp).
void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<std::pair<std::string, double>>& timings_s);

void write_text_file(const std::string& path, const std::string& content);

std::string version_string();

}  // namespace polariton
