#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "contourqa/distance.hpp"
#include "contourqa/rng.hpp"
#include "oracles.hpp"

using namespace cqa;

namespace {

GridInfo make_grid(std::array<int, 3> dims, std::array<double, 3> spacing = {1, 1, 1}) {
    GridInfo g;
    g.dims = dims;
    g.spacing = spacing;
    return g;
}

}  // namespace

TEST_CASE("single foreground voxel: center -1mm, neighbors +1mm") {
    BinaryMask mask(make_grid({5, 5, 5}));
    mask.set(2, 2, 2, true);
    Volume sdf = signed_distance_transform(mask);
    CHECK(sdf.at(2, 2, 2) == doctest::Approx(-1.0));
    CHECK(sdf.at(3, 2, 2) == doctest::Approx(1.0));
    CHECK(sdf.at(2, 1, 2) == doctest::Approx(1.0));
    CHECK(sdf.at(4, 2, 2) == doctest::Approx(2.0));
    CHECK(sdf.at(4, 4, 2) == doctest::Approx(std::sqrt(8.0)));

    // radial symmetry: value depends only on |offset|
    Volume oracle = brute_force_sdt(mask);
    for (size_t i = 0; i < sdf.data.size(); ++i) CHECK(sdf.data[i] == doctest::Approx(oracle.data[i]).epsilon(1e-6));
}

TEST_CASE("two-voxel slab interior") {
    BinaryMask mask(make_grid({7, 7, 7}));
    for (int z = 0; z < 7; ++z)
        for (int y = 0; y < 7; ++y)
            for (int x = 3; x <= 4; ++x) mask.set(x, y, z, true);
    Volume sdf = signed_distance_transform(mask);
    CHECK(sdf.at(3, 3, 3) == doctest::Approx(-1.0));
    CHECK(sdf.at(4, 3, 3) == doctest::Approx(-1.0));
    CHECK(sdf.at(2, 3, 3) == doctest::Approx(1.0));
}

TEST_CASE("half-space mask gives a linear ramp") {
    BinaryMask mask(make_grid({9, 4, 4}, {1.5, 1.5, 1.5}));
    for (int z = 0; z < 4; ++z)
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) mask.set(x, y, z, true);  // x < 4 foreground
    Volume sdf = signed_distance_transform(mask);
    for (int x = 0; x < 9; ++x) {
        const double expected = x < 4 ? -1.5 * (4 - x) : 1.5 * (x - 3);
        CHECK(sdf.at(x, 2, 2) == doctest::Approx(expected));
    }
}

TEST_CASE("anisotropic spacing honored") {
    BinaryMask mask(make_grid({5, 5, 5}, {1, 1, 3}));
    mask.set(2, 2, 2, true);
    Volume sdf = signed_distance_transform(mask);
    CHECK(sdf.at(2, 2, 3) == doctest::Approx(3.0));  // z neighbor is 3mm away
    CHECK(sdf.at(2, 2, 2) == doctest::Approx(-1.0)); // nearest background is an x/y neighbor
}

TEST_CASE("exactness vs brute force on random masks, isotropic and anisotropic") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const bool aniso = trial % 2 == 1;
        GridInfo g = make_grid({16, 16, 16}, aniso ? std::array<double, 3>{0.8, 1.0, 2.5}
                                                   : std::array<double, 3>{1.0, 1.0, 1.0});
        BinaryMask mask = oracle::random_mask(g, 0.2 + 0.6 * rng.next_uniform(), rng);
        Volume fast = signed_distance_transform(mask);
        Volume slow = brute_force_sdt(mask);
        double max_err = 0;
        for (size_t i = 0; i < fast.data.size(); ++i)
            max_err = std::max(max_err, std::abs(double(fast.data[i]) - double(slow.data[i])));
        CHECK(max_err < 1e-4);
    }
}

TEST_CASE("Lipschitz property along axis-adjacent pairs") {
    // Same-class pairs are 1-Lipschitz (each one-sided EDT is). Across the class
    // boundary the voxel-center definition jumps by up to twice the step (e.g. -1 to +1
    // over 1mm), so those pairs are bounded by 2x the step instead.
    Rng rng(5);
    GridInfo g = make_grid({12, 12, 12}, {1.0, 1.5, 2.0});
    BinaryMask mask = oracle::random_mask(g, 0.3, rng);
    Volume sdf = signed_distance_transform(mask);
    auto check_pair = [&](int x0, int y0, int z0, int x1, int y1, int z1, double step) {
        const double jump = std::abs(sdf.at(x1, y1, z1) - sdf.at(x0, y0, z0));
        const bool same_class = mask.at(x0, y0, z0) == mask.at(x1, y1, z1);
        CHECK(jump <= (same_class ? step : 2.0 * step) + 1e-6);
    };
    for (int z = 0; z < 12; ++z)
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x < 12; ++x) {
                if (x + 1 < 12) check_pair(x, y, z, x + 1, y, z, 1.0);
                if (y + 1 < 12) check_pair(x, y, z, x, y + 1, z, 1.5);
                if (z + 1 < 12) check_pair(x, y, z, x, y, z + 1, 2.0);
            }
}

TEST_CASE("negating the mask flips all signs exactly") {
    Rng rng(77);
    BinaryMask mask = oracle::random_mask(make_grid({10, 10, 10}), 0.4, rng);
    BinaryMask flipped = mask;
    for (auto& v : flipped.data) v = v ? 0 : 1;
    Volume a = signed_distance_transform(mask);
    Volume b = signed_distance_transform(flipped);
    for (size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == -b.data[i]);
}

TEST_CASE("degenerate masks are rejected") {
    BinaryMask empty(make_grid({4, 4, 4}));
    CHECK_THROWS_WITH_AS(signed_distance_transform(empty), "degenerate mask", std::invalid_argument);
    BinaryMask full(make_grid({4, 4, 4}), 1);
    CHECK_THROWS_WITH_AS(signed_distance_transform(full), "degenerate mask", std::invalid_argument);
}

TEST_CASE("brute force size guard") {
    BinaryMask big(make_grid({65, 65, 65}));
    big.set(0, 0, 0, true);
    CHECK_THROWS_AS(brute_force_sdt(big), std::invalid_argument);
}
