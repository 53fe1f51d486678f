#pragma once

#include <string>

#include "wsob/minimize.hpp"
#include "wsob/ode.hpp"
#include "wsob/quadrature.hpp"
#include "wsob/rearrange.hpp"

namespace wsob::io {

/// RFC-4180 CSV (CRLF line endings, '.' decimal separator, 17 significant
/// digits).
std::string format_double(double v);

void write_profile_csv(const std::string& path, const ode::RadialProfile& p);
void write_field_csv(const std::string& path, const quad::Field2D& f);
void write_lattice_csv(const std::string& path, const rearrange::LatticeField& f);
void write_trace_csv(const std::string& path, const std::vector<double>& F_history);

rearrange::LatticeField read_lattice_csv(const std::string& path);

}  // namespace wsob::io
