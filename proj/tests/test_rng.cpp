#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "landau/rng.hpp"

using namespace landau;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // reference vectors from the Random123 distribution
    Philox p0(0);
    auto r = p0.block(0, 0, 0, 0);
    CHECK(r[0] == 0x6627e8d5u);
    CHECK(r[1] == 0xe169c58du);
    CHECK(r[2] == 0xbc57ac4cu);
    CHECK(r[3] == 0x9b00dbd8u);

    Philox p1(0xffffffffffffffffull);
    r = p1.block(0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu);
    CHECK(r[0] == 0x408f276du);
    CHECK(r[1] == 0x41c83b0eu);
    CHECK(r[2] == 0xa20bc7c6u);
    CHECK(r[3] == 0x6d5451fdu);

    Philox p2(0x299f31d0a4093822ull);
    r = p2.block(0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u);
    CHECK(r[0] == 0xd16cfe09u);
    CHECK(r[1] == 0x94fdccebu);
    CHECK(r[2] == 0x5001e420u);
    CHECK(r[3] == 0x24126ea1u);
}

TEST_CASE("site draws are schedule independent and deterministic") {
    Philox rng(12345);
    double a = rng.site_uniform(-3, 7, 42);
    double b = rng.site_uniform(100, -5, 42);
    double a2 = rng.site_uniform(-3, 7, 42);
    CHECK(a == a2);
    CHECK(a != b);
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
}

TEST_CASE("stream moments look uniform") {
    PhiloxStream s(987, 0);
    const int n = 200000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        double u = s.next();
        sum += u;
        sumsq += u * u;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 0.005);
    CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}
