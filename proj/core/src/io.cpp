#include "wsob/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wsob::io {

namespace {
constexpr const char* kEol = "\r\n";

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}
}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_profile_csv(const std::string& path, const ode::RadialProfile& p) {
    auto out = open_out(path);
    out << "r,psi,dpsi" << kEol;
    for (size_t i = 0; i < p.r.size(); ++i)
        out << format_double(p.r[i]) << ',' << format_double(p.psi[i]) << ','
            << format_double(p.dpsi[i]) << kEol;
}

void write_field_csv(const std::string& path, const quad::Field2D& f) {
    auto out = open_out(path);
    out << "rho,t,u" << kEol;
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < f.nt(); ++j)
            out << format_double(f.rho_grid[i]) << ',' << format_double(f.t_grid[j]) << ','
                << format_double(f.at(i, j)) << kEol;
}

void write_lattice_csv(const std::string& path, const rearrange::LatticeField& f) {
    auto out = open_out(path);
    out << "n,m,extent,res" << kEol;
    out << f.n << ',' << f.m << ',' << format_double(f.extent) << ',' << f.res << kEol;
    out << "value" << kEol;
    for (double v : f.values) out << format_double(v) << kEol;
}

void write_trace_csv(const std::string& path, const std::vector<double>& F_history) {
    auto out = open_out(path);
    out << "step,F" << kEol;
    for (size_t i = 0; i < F_history.size(); ++i)
        out << i << ',' << format_double(F_history[i]) << kEol;
}

rearrange::LatticeField read_lattice_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    auto next = [&]() {
        if (!std::getline(in, line)) throw std::runtime_error("truncated lattice csv");
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        return line;
    };
    next();  // header
    next();
    std::istringstream hdr(line);
    int n, m, res;
    double extent;
    char c;
    hdr >> n >> c >> m >> c >> extent >> c >> res;
    if (!hdr) throw std::runtime_error("bad lattice csv header");
    auto f = rearrange::LatticeField::zeros(n, m, extent, res);
    next();  // "value"
    for (auto& v : f.values) {
        next();
        v = std::stod(line);
    }
    return f;
}

}  // namespace wsob::io
