#include "eulab/field_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "field serialization assumes a little-endian host");

namespace eulab {

void write_field(std::ostream& os, const RealField& f) {
    std::int64_t n = f.grid.n;
    double L = f.grid.L;
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&L), sizeof L);
    os.write(reinterpret_cast<const char*>(f.v.data()),
             std::streamsize(f.v.size() * sizeof(double)));
}

RealField read_field(std::istream& is) {
    std::int64_t n = 0;
    double L = 0.0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&L), sizeof L);
    if (!is || n < 8 || n > 4096)
        throw std::runtime_error("read_field: bad header");
    RealField f(Grid(int(n), L));
    is.read(reinterpret_cast<char*>(f.v.data()),
            std::streamsize(f.v.size() * sizeof(double)));
    if (!is)
        throw std::runtime_error("read_field: truncated payload");
    return f;
}

void write_field_file(const std::string& path, const RealField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("write_field_file: cannot open " + path);
    write_field(os, f);
}

RealField read_field_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("read_field_file: cannot open " + path);
    return read_field(is);
}

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_field_csv(std::ostream& os, const RealField& f) {
    os << "x,y,z,value\n";
    const Grid& g = f.grid;
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        auto p = g.point(i, j, k);
        os << fmt_double(p[0]) << ',' << fmt_double(p[1]) << ','
           << fmt_double(p[2]) << ',' << fmt_double(f.v[size_t(idx)]) << '\n';
    });
}

} // namespace eulab
