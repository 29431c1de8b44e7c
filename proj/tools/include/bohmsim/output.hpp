#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bohm/phase_space.hpp"

namespace bohmsim {

// Column with its unit, for '#' headers.
struct Column {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

// Delimited text, one row per sample, '#'-prefixed self-describing header.
// Numbers are printed with %.17g so files round-trip exactly.
void write_columns(const std::filesystem::path& path, const std::string& title,
                   const std::vector<std::pair<std::string, std::string>>& meta, const std::vector<Column>& columns);

// Little-endian flat binary: "MBW1", uint64 nx, uint64 np, then nx*np
// float64 values, row-major (x outer, p inner).
void write_mbw1(const std::filesystem::path& path, const bohm::WignerField& F);
bohm::WignerField read_mbw1(const std::filesystem::path& path, const bohm::PhaseSpaceGrid& grid);

// x p F triples for the same field as text.
void write_wigner_text(const std::filesystem::path& path, const bohm::WignerField& F, double t);

// Plotting scripts emitted as text next to the data; nothing is linked.
void write_plot_scripts(const std::filesystem::path& dir);

std::string format_double(double v);

}  // namespace bohmsim
