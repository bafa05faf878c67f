#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtip/equilibria.hpp"
#include "rtip/integrate.hpp"
#include "rtip/monotone.hpp"
#include "rtip/tipping.hpp"

namespace rtip {

using ordered_json = nlohmann::ordered_json;

/// Shortest-width formatting that round-trips doubles exactly (%.17g).
std::string fmt17(double x);

/// RFC 4180 CSV: CRLF line endings, quoting only where required.
std::string csv_escape(const std::string& field);

std::string trajectory_csv(const Trajectory& traj, const ParameterShift* shift = nullptr);
std::string path_csv(const EquilibriumPath& path);
std::string sweep_csv(const std::vector<RateSweepEntry>& entries);
std::string boxes_csv(const FisBoxGrid& grid);
std::string fbs_csv(const FbsReport& report);

ordered_json trajectory_json(const Trajectory& traj);
ordered_json path_json(const EquilibriumPath& path);
ordered_json verdict_json(const TippingVerdict& v);
ordered_json sweep_json(const std::vector<RateSweepEntry>& entries);
ordered_json critical_rate_json(const CriticalRateResult& r);
ordered_json basin_json(const BasinResult& r);
ordered_json force_json(const ForcedTippingResult& r);
ordered_json fbs_json(const FbsReport& r);
ordered_json fis_json(const FISCertificate& c);
ordered_json monotone_check_json(const MonotoneCheck& mc);
ordered_json guarantee_json(const TippingGuarantee& g);
ordered_json no_tipping_json(const NoTippingCertificate& c);
ordered_json sigma_json(const SigmaSpec& s);
ordered_json shift_json(const ShiftSpec& s);

/// Self-contained phase portrait: equilibrium branches as dot chains shading
/// from blue to green along s, the trajectory (when given) as a red polyline
/// clipped to the viewport. The viewport is the branches' bounding box padded
/// by 10%. Axes are x0/x1 in the plane, x0/x2 in three dimensions, and s/x0
/// for scalar models. Output contains nothing run-dependent.
std::string phase_svg(const std::vector<EquilibriumPath>& paths,
                      const Trajectory* trajectory = nullptr);

/// Writes bytes exactly as given (binary mode), creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rtip
