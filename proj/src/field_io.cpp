#include "vortlab/field_io.hpp"

#include "vortlab/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

namespace vortlab {

namespace {

constexpr std::array<char, 4> kMagic{'V', 'L', 'F', '1'};

template <class T>
void put_le(std::ostream& out, T value)
{
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in)
{
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), bytes.size())) {
        throw PreconditionError("truncated field file");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

void write_header(std::ostream& out, const Grid& g, std::uint32_t components)
{
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
    put_le<std::uint32_t>(out, components);
    put_le<double>(out, g.box_length());
}

void write_csv_impl(std::ostream& out, const Grid& g, std::span<const ScalarField> comps)
{
    out << "# dim=" << g.dim() << " n=" << g.n() << " L=" << format_double(g.box_length())
        << " components=" << comps.size() << '\n';
    out << (g.dim() == 2 ? "i0,i1" : "i0,i1,i2");
    for (std::size_t c = 0; c < comps.size(); ++c) {
        out << ",f" << c;
    }
    out << '\n';
    const int n = g.n();
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (g.dim() == 2) {
            out << idx / n << ',' << idx % n;
        } else {
            out << idx / (static_cast<std::size_t>(n) * n) << ',' << (idx / n) % n << ',' << idx % n;
        }
        for (const auto& c : comps) {
            out << ',' << format_double(c[idx]);
        }
        out << '\n';
    }
}

} // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

void write_binary(std::ostream& out, const VectorField& f)
{
    write_header(out, f.grid(), static_cast<std::uint32_t>(f.dim()));
    for (const auto& c : f.components()) {
        for (double v : c.samples()) {
            put_le<double>(out, v);
        }
    }
}

void write_binary(std::ostream& out, const ScalarField& f)
{
    write_header(out, f.grid(), 1);
    for (double v : f.samples()) {
        put_le<double>(out, v);
    }
}

VectorField read_binary(std::istream& in)
{
    std::array<char, 4> magic;
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw PreconditionError("not a field file (bad magic)");
    }
    const auto dim = get_le<std::uint32_t>(in);
    const auto n = get_le<std::uint32_t>(in);
    const auto components = get_le<std::uint32_t>(in);
    const auto box = get_le<double>(in);
    const Grid g(static_cast<int>(dim), static_cast<int>(n), box);
    if (components == 0 || components > 16) {
        throw PreconditionError("field file has an invalid component count");
    }
    std::vector<ScalarField> comps;
    for (std::uint32_t c = 0; c < components; ++c) {
        ScalarField f(g);
        for (auto& v : f.samples()) {
            v = get_le<double>(in);
        }
        comps.push_back(std::move(f));
    }
    return VectorField(std::move(comps));
}

void write_csv(std::ostream& out, const VectorField& f)
{
    write_csv_impl(out, f.grid(), f.components());
}

void write_csv(std::ostream& out, const ScalarField& f)
{
    write_csv_impl(out, f.grid(), std::span<const ScalarField>(&f, 1));
}

} // namespace vortlab
