#include "swave/csv.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "swave/config.hpp"

namespace swave::io {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path())
        std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

void write_csv(const std::filesystem::path& file,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows)
            throw std::invalid_argument("write_csv: ragged columns");
    std::string text;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) text += ',';
        text += header[j];
    }
    text += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) text += ',';
            text += format_g17(columns[j][i]);
        }
        text += '\n';
    }
    write_text(file, text);
}

void write_state_csv(const std::filesystem::path& file,
                     const dynamics::Grid& grid, const dynamics::State& s) {
    std::vector<double> x(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) x[i] = grid.x(i);
    write_csv(file, {"x", "u", "v"}, {x, s.u, s.v});
}

void write_trajectory_csv(const std::filesystem::path& file,
                          const dynamics::Trajectory& traj) {
    write_csv(file, {"t", "norm_u_H1", "norm_v_L2", "energy_E", "tail_mass"},
              {traj.t, traj.norm_u_h1, traj.norm_v, traj.energy, traj.tail});
}

void write_audit_csv(const std::filesystem::path& file,
                     const energy::EnergyAudit& audit) {
    // central-difference audits only define the residual at interior samples;
    // restrict every column to the rows where it exists
    const std::size_t n = audit.t.size();
    if (audit.residual.size() == n) {
        write_csv(file, {"t", "E", "G", "residual"},
                  {audit.t, audit.E, audit.G, audit.residual});
        return;
    }
    if (audit.residual.size() + 2 != n)
        throw std::invalid_argument(
            "write_audit_csv: unexpected residual length");
    std::vector<double> t(audit.t.begin() + 1, audit.t.end() - 1);
    std::vector<double> E(audit.E.begin() + 1, audit.E.end() - 1);
    std::vector<double> G(audit.G.begin() + 1, audit.G.end() - 1);
    write_csv(file, {"t", "E", "G", "residual"}, {t, E, G, audit.residual});
}

void write_json(const std::filesystem::path& file, const nlohmann::json& j) {
    write_text(file, canonical_dump(j));
}

void write_manifest(const std::filesystem::path& dir,
                    const std::string& command, const nlohmann::json& echo,
                    const nlohmann::json& derived,
                    const std::vector<std::string>& outputs) {
    nlohmann::json m;
    m["command"] = command;
    m["config"] = echo;
    m["config_hash"] = config_hash_hex(echo);
    m["derived"] = derived;
    m["outputs"] = outputs;
    m["versions"] = {
        {"swave", "0.1.0"},
        {"compiler", __VERSION__},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                              "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
    };
    const auto now = std::chrono::system_clock::now();
    const auto secs =
        std::chrono::duration_cast<std::chrono::seconds>(
            now.time_since_epoch())
            .count();
    m["wall_clock_utc"] = static_cast<std::int64_t>(secs);
    write_json(dir / "manifest.json", m);
}

}  // namespace swave::io
