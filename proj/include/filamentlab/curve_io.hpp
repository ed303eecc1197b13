#pragma once

#include <string>

#include "filamentlab/quasi_curve.hpp"
#include "filamentlab/sphere_field.hpp"

namespace flab {

// Node data as CSV ("s,x,y,z", one row per node) plus a JSON sidecar at
// <path>.json recording {period, pitch, N}.  Values are printed with 17
// significant digits so a round trip reproduces doubles exactly; writes go
// through a temp file + rename so readers never see a half-written file.
void write_curve_csv(const std::string& path, const QuasiCurve& curve);
QuasiCurve read_curve_csv(const std::string& path);

void write_field_csv(const std::string& path, const SphereField& field);
SphereField read_field_csv(const std::string& path);

// Shared atomic text writer (temp file in the same directory, then rename).
void atomic_write_text(const std::string& path, const std::string& content);

} // namespace flab
