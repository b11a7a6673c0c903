#pragma once

#include "vortlab/field.hpp"

#include <iosfwd>
#include <string>

namespace vortlab {

// Binary layout, all little-endian:
//   char[4]  magic "VLF1"
//   uint32   dim
//   uint32   n
//   uint32   components
//   float64  box_length
//   float64  samples[components][n^dim], row-major, last axis fastest
//
// CSV layout: a header line "# dim=<d> n=<n> L=<L> components=<c>", a column header
// line, then one row per lattice point with the lattice indices followed by the
// component values (17 significant digits).

void write_binary(std::ostream& out, const VectorField& f);
void write_binary(std::ostream& out, const ScalarField& f);
VectorField read_binary(std::istream& in);

void write_csv(std::ostream& out, const VectorField& f);
void write_csv(std::ostream& out, const ScalarField& f);

/// "%.17g" formatting with '.' decimal separator.
std::string format_double(double v);

} // namespace vortlab
