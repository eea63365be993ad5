#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "nlstrap/grid.hpp"

namespace nlstrap {

// Binary field file, all little-endian:
//   "NLS3" | u32 version | u32 n1, n2, n3 | f64 L1, L2, L3 | n1*n2*n3 x (f64 re, f64 im)
// with x3 the fastest axis.
inline constexpr std::uint32_t kFieldFormatVersion = 1;

class FieldIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);

void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

}  // namespace nlstrap
