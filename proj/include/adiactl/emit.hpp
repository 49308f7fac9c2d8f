// File formats: trajectory CSV, summary JSON, comparison CSV, SVG charts, state dumps.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adiactl/run.hpp"

namespace adiactl {

/// "t,fidelity,V,gap,E_tot_0,...,f_0,...,nonlinear,tunneling,regularized,clamped".
std::string csv_header(std::size_t dim, std::size_t controls);

/// Header plus one row per sample; floats as %.12e, flags as 0/1.
std::string trajectory_csv(const RunResult& r);

std::string summary_json(const RunReport& report);

/// "value,min_fidelity,mean_fidelity,final_fidelity" with rows in the given order.
std::string comparison_csv(const std::vector<SweepPoint>& points);

/// t followed by re/im of every amplitude, at full precision.
std::string state_dump_csv(const Trajectoryd& traj);

/// Single-panel SVG 1.1 line charts.
std::string fidelity_svg(const RunResult& r);
std::string spectrum_svg(const RunResult& r);

/// Writes `content` to `path`; failures raise Error naming the path.
void write_text(const std::filesystem::path& path, const std::string& content);

/// %.12e.
std::string format_float(double v);

}  // namespace adiactl
