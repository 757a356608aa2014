// csv.hpp — CSV emission for the sampled characteristic function, work
// distributions, and J(T) curves. Numbers are written with round-trip
// precision so downstream analysis can recompute every report exactly.

#pragma once

#include "qwork/thermometry.hpp"
#include "qwork/work.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qwork {

// columns: u,re_g,im_g,shots
void write_char_fn_csv(const std::filesystem::path& path, const CharFnSamples& samples);

// columns: w,density
void write_density_csv(const std::filesystem::path& path, const GridDensity& grid);

// columns: w,weight
void write_comb_csv(const std::filesystem::path& path, const DeltaComb& comb);

// columns: T_mK,J
void write_jcurve_csv(const std::filesystem::path& path, const std::vector<JCurvePoint>& curve);

} // namespace qwork
