// csv.cpp — CSV writers with round-trip numeric formatting.

#include "qwork/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace qwork {

namespace {

std::string fmt(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
    return out;
}

} // namespace

void write_char_fn_csv(const std::filesystem::path& path, const CharFnSamples& samples) {
    samples.validate();
    std::ofstream out = open_out(path);
    out << "u,re_g,im_g,shots\n";
    for (std::size_t i = 0; i < samples.u.size(); ++i)
        out << fmt(samples.u[i]) << ',' << fmt(samples.values[i].real()) << ','
            << fmt(samples.values[i].imag()) << ',' << samples.shots << '\n';
}

void write_density_csv(const std::filesystem::path& path, const GridDensity& grid) {
    grid.validate();
    std::ofstream out = open_out(path);
    out << "w,density\n";
    for (std::size_t i = 0; i < grid.w.size(); ++i)
        out << fmt(grid.w[i]) << ',' << fmt(grid.density[i]) << '\n';
}

void write_comb_csv(const std::filesystem::path& path, const DeltaComb& comb) {
    std::ofstream out = open_out(path);
    out << "w,weight\n";
    for (const auto& [w, p] : comb.points)
        out << fmt(w) << ',' << fmt(p) << '\n';
}

void write_jcurve_csv(const std::filesystem::path& path, const std::vector<JCurvePoint>& curve) {
    std::ofstream out = open_out(path);
    out << "T_mK,J\n";
    for (const JCurvePoint& pt : curve)
        out << fmt(pt.temperature_mK) << ',' << fmt(pt.j_value) << '\n';
}

} // namespace qwork
