#include "nlstrap/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace nlstrap {

namespace {

constexpr char kMagic[4] = {'N', 'L', 'S', '3'};

template <typename U>
void put_le(std::ostream& os, U value) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    }
    os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is) {
    std::array<unsigned char, sizeof(U)> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw FieldIoError("field file truncated");
    }
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

void put_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void write_field(std::ostream& os, const Field& f) {
    const Grid3& g = f.grid();
    os.write(kMagic, 4);
    put_le<std::uint32_t>(os, kFieldFormatVersion);
    for (int a = 0; a < 3; ++a) put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n(a)));
    for (int a = 0; a < 3; ++a) put_f64(os, g.length(a));
    for (const auto& z : f.values()) {
        put_f64(os, z.real());
        put_f64(os, z.imag());
    }
    if (!os) throw FieldIoError("field write failed");
}

Field read_field(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4)) throw FieldIoError("field file truncated");
    if (std::memcmp(magic, kMagic, 4) != 0) throw FieldIoError("bad magic: not an NLS3 field file");
    const auto version = get_le<std::uint32_t>(is);
    if (version != kFieldFormatVersion) {
        throw FieldIoError("unsupported field format version " + std::to_string(version));
    }
    std::array<int, 3> n{};
    std::array<double, 3> L{};
    for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(get_le<std::uint32_t>(is));
    for (int a = 0; a < 3; ++a) L[a] = get_f64(is);
    Grid3 grid = [&] {
        try {
            return Grid3(n, L);
        } catch (const std::invalid_argument& e) {
            throw FieldIoError(std::string("invalid grid header: ") + e.what());
        }
    }();
    std::vector<cplx> values(grid.size());
    for (auto& z : values) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        z = {re, im};
    }
    try {
        return Field(std::move(grid), std::move(values));
    } catch (const std::invalid_argument& e) {
        throw FieldIoError(std::string("invalid field payload: ") + e.what());
    }
}

void write_field(const std::filesystem::path& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FieldIoError("cannot open " + path.string() + " for writing");
    write_field(os, f);
}

Field read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldIoError("cannot open " + path.string());
    return read_field(is);
}

}  // namespace nlstrap
