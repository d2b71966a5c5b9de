#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace facpca {

/// "index eigenvalue" lines, one per point.
std::string scree_series(const std::vector<double>& eigenvalues);

/// Standalone SVG line plot of eigenvalue against index.
std::string scree_svg(const std::vector<double>& eigenvalues, const std::string& title = "Scree plot");

/// Writes `<stem>.txt` and `<stem>.svg`. Output is byte-deterministic.
void emit_scree(const std::vector<double>& eigenvalues, const std::filesystem::path& stem,
                const std::string& title = "Scree plot");

}  // namespace facpca
