#pragma once

#include <string>
#include <vector>

#include "specrange/numrange.hpp"
#include "specrange/perturbation.hpp"
#include "specrange/secular.hpp"
#include "specrange/volterra.hpp"

namespace specrange {

// all emitters print numbers with 17 significant digits and contain nothing
// run-dependent (no clocks, no paths), so equal inputs give equal bytes

std::string boundary_csv(const NumRangeBoundary& b);
std::string region_csv(const ConvexRegion& r);
std::string trajectory_csv(const TrajectorySet& t);
std::string absorption_kv(const AbsorptionReport& r);
std::string absorption_csv(const AbsorptionReport& r);
std::string scan_csv(const std::vector<ScanRow>& rows);
std::string volterra_kv(const VolterraReport& r);
std::string volterra_csv(const VolterraReport& r);
std::string capcheck_kv(const CapReport& r);
std::string capcheck_csv(const CapReport& r);
std::string sigma_slope_kv(const SigmaSlopeReport& r);
std::string sigma_slope_csv(const SigmaSlopeReport& r);

void write_file(const std::string& path, const std::string& content);

}  // namespace specrange
