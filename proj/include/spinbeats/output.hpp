// CSV and SVG emission. Every file starts with the resolved config and seed
// as '#' comments; numbers are written with 17 significant digits so a rerun
// reproduces the file byte for byte.
#pragma once

#include <string>
#include <vector>

#include "spinbeats/config.hpp"

namespace spinbeats {

struct Series {
    std::string label;
    std::vector<double> y;
};

// '#'-prefixed reproduction header for an output file.
std::string config_header(const RunConfig& cfg);

// header + column-name row + the given pre-formatted rows.
std::string csv_document(const RunConfig& cfg, const std::vector<std::string>& column_names,
                         const std::vector<std::vector<std::string>>& rows,
                         const std::vector<std::string>& trailing_comments = {});

// Single-panel polyline plot with axes and tick labels.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::vector<double>& x, const std::vector<Series>& series);

// Write atomically enough for our purposes: build in memory, then write in
// one stream; nothing is created when composing the document throws.
void write_file(const std::string& path, const std::string& content);

}  // namespace spinbeats
