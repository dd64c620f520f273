// Field serialization: flat little-endian binary (header: n as int64, L as
// float64, then n^3 values) and a (x,y,z,value) CSV form for small grids.
// All floating text output uses %.17g so round-trips are bit-exact.
#ifndef EULAB_FIELD_IO_HPP
#define EULAB_FIELD_IO_HPP

#include "eulab/grid.hpp"

#include <iosfwd>
#include <string>

namespace eulab {

void write_field(std::ostream& os, const RealField& f);
RealField read_field(std::istream& is);

void write_field_file(const std::string& path, const RealField& f);
RealField read_field_file(const std::string& path);

void write_field_csv(std::ostream& os, const RealField& f);

// Deterministic float formatting shared by every CSV/JSON writer.
std::string fmt_double(double x);

} // namespace eulab

#endif
