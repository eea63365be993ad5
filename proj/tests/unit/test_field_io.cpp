#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "nlstrap/field_io.hpp"
#include "nlstrap/random_fields.hpp"

using namespace nlstrap;

TEST_SUITE("field_io") {

TEST_CASE("round trip is exact and the header is little-endian NLS3") {
    std::mt19937_64 rng(2);
    const Field f = random_smooth_field(fixtures::small(), rng);
    std::stringstream ss;
    write_field(ss, f);
    const std::string bytes = ss.str();
    CHECK(bytes.size() == 4 + 4 + 12 + 24 + 16 * f.size());
    CHECK(bytes.substr(0, 4) == "NLS3");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);
    CHECK(bytes[5] == 0);
    CHECK(static_cast<unsigned char>(bytes[8]) == 16);
    double L1 = 0.0;
    std::memcpy(&L1, bytes.data() + 20, 8);
    CHECK(L1 == 12.0);

    const Field g = read_field(ss);
    CHECK(g.grid().same_geometry(f.grid()));
    CHECK(std::equal(f.values().begin(), f.values().end(), g.values().begin()));

    std::stringstream again;
    write_field(again, g);
    CHECK(again.str() == bytes);
}

TEST_CASE("corrupted files raise I/O errors") {
    std::stringstream ok;
    write_field(ok, Field::zeros(fixtures::small()));
    const std::string bytes = ok.str();

    std::string bad = bytes;
    bad[0] = 'X';
    std::stringstream s1(bad);
    CHECK_THROWS_WITH_AS(read_field(s1), doctest::Contains("magic"), FieldIoError);

    std::string version = bytes;
    version[4] = 7;
    std::stringstream s2(version);
    CHECK_THROWS_AS(read_field(s2), FieldIoError);

    std::stringstream s3(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_field(s3), FieldIoError);

    CHECK_THROWS_AS(read_field(std::filesystem::path("/nonexistent/field.nls3")), FieldIoError);
}

}
