#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "swave/energy.hpp"
#include "swave/grid.hpp"
#include "swave/integrator.hpp"

namespace swave::io {

/// 17 significant digits ("%.17g"): enough to round-trip any double.
std::string format_g17(double v);

/// Column-major numeric CSV with a header row; columns must share a length.
void write_csv(const std::filesystem::path& file,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_state_csv(const std::filesystem::path& file,
                     const dynamics::Grid& grid, const dynamics::State& s);

/// t, norm_u_H1, norm_v_L2, energy_E, tail_mass
void write_trajectory_csv(const std::filesystem::path& file,
                          const dynamics::Trajectory& traj);

/// t, E, G, residual
void write_audit_csv(const std::filesystem::path& file,
                     const energy::EnergyAudit& audit);

void write_text(const std::filesystem::path& file, const std::string& text);

/// Canonical JSON (sorted keys, two-space indent, trailing newline).
void write_json(const std::filesystem::path& file, const nlohmann::json& j);

/// manifest.json: command, effective config echo + hash, derived quantities,
/// the emitted file list, library/compiler versions, and the wall clock
/// (the single nondeterministic field, excluded from reproducibility checks).
void write_manifest(const std::filesystem::path& dir,
                    const std::string& command, const nlohmann::json& echo,
                    const nlohmann::json& derived,
                    const std::vector<std::string>& outputs);

}  // namespace swave::io
