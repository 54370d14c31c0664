#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "uavnet/world.hpp"

namespace uavnet::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

// Deterministic SVG 1.1 line chart.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

// UEs colored by their serving station; UAVs as triangles, GBSs as squares.
std::string snapshot_svg(const WorldState& state);

// Trailing moving average; entry i averages the last min(i + 1, window) values.
std::vector<double> moving_average(const std::vector<double>& v, std::size_t window);

// Renders one CSV (snapshot, training episodes, run record, or comparison) to
// out_dir/<stem>.svg and returns the path. Nothing is written on error.
std::filesystem::path plot_file(const std::filesystem::path& input,
                                const std::filesystem::path& out_dir);

} // namespace uavnet::plot
