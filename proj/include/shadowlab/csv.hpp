#pragma once

#include <string>
#include <vector>

#include "shadowlab/pseudotraj.hpp"

namespace shadowlab {

// Simple CSV table with a fixed header row; numeric cells only.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void write(const std::string& path) const;
};

// Trajectory serialization: columns t, region, v1..v5 where v carries the
// chart coordinates, transit progress+offsets, or far-state snapshot. The
// JSON sidecar (written next to the CSV as <path>.json) holds the defect
// bound, provenance and grid data.
void write_pseudotraj_csv(const PseudoTraj& g, const std::string& path);
PseudoTraj read_pseudotraj_csv(const std::string& path);

} // namespace shadowlab
