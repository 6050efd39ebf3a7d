#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "contourqa/grid.hpp"
#include "contourqa/nifti.hpp"
#include "contourqa/rng.hpp"

using namespace cqa;

namespace {

GridInfo make_grid(std::array<int, 3> dims, std::array<double, 3> spacing = {1, 1, 1},
                   std::array<double, 3> origin = {0, 0, 0}) {
    GridInfo g;
    g.dims = dims;
    g.spacing = spacing;
    g.origin = origin;
    return g;
}

std::filesystem::path tmp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "cqa_test_grid";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("world/voxel round trip is exact on the rational grid") {
    GridInfo g = make_grid({7, 9, 5}, {1.25, 0.5, 3.0}, {-10.0, 4.5, 7.25});
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        Vec3 idx{double(rng.next_below(7)), double(rng.next_below(9)), double(rng.next_below(5))};
        Vec3 p = g.voxel_to_world(idx);
        Vec3 back = g.world_to_voxel(p);
        CHECK(back.x == doctest::Approx(idx.x).epsilon(1e-12));
        CHECK(back.y == doctest::Approx(idx.y).epsilon(1e-12));
        CHECK(back.z == doctest::Approx(idx.z).epsilon(1e-12));
        // and the exact composition property the other way
        Vec3 p2 = g.voxel_to_world(g.world_to_voxel(p));
        CHECK(p2.x == doctest::Approx(p.x).epsilon(1e-12));
    }
}

TEST_CASE("grid validation rejects bad dims/spacing") {
    CHECK_THROWS(validate_grid(make_grid({1, 4, 4})));
    CHECK_THROWS(validate_grid(make_grid({4, 4, 4}, {0.0, 1, 1})));
    CHECK_NOTHROW(validate_grid(make_grid({2, 2, 2})));
}

TEST_CASE("trilinear: voxel center identity and constant field") {
    Volume vol(make_grid({4, 4, 4}, {2, 2, 2}, {1, 1, 1}));
    Rng rng(3);
    for (auto& v : vol.data) v = static_cast<float>(rng.next_uniform());

    // exact voxel center
    CHECK(trilinear_sample(vol, vol.voxel_to_world({2, 1, 3})) == doctest::Approx(vol.at(2, 1, 3)).epsilon(1e-12));

    Volume cvol(make_grid({5, 5, 5}));
    for (auto& v : cvol.data) v = 4.25f;
    Rng rng2(4);
    for (int t = 0; t < 50; ++t) {
        Vec3 p{rng2.next_uniform() * 4.0, rng2.next_uniform() * 4.0, rng2.next_uniform() * 4.0};
        CHECK(trilinear_sample(cvol, p) == doctest::Approx(4.25).epsilon(1e-12));
    }
}

TEST_CASE("trilinear reproduces affine fields exactly (linear ramp midpoint included)") {
    GridInfo g = make_grid({6, 5, 4}, {1.5, 2.0, 1.0}, {-2, 3, 0});
    Volume vol(g);
    auto f = [](const Vec3& p) { return 0.75 * p.x - 1.25 * p.y + 2.0 * p.z + 0.5; };
    for (int z = 0; z < g.dims[2]; ++z)
        for (int y = 0; y < g.dims[1]; ++y)
            for (int x = 0; x < g.dims[0]; ++x)
                vol.at(x, y, z) = static_cast<float>(f(g.voxel_to_world({double(x), double(y), double(z)})));

    // midway between two voxel centers along x -> arithmetic mean
    Vec3 a = g.voxel_to_world({1, 2, 2}), b = g.voxel_to_world({2, 2, 2});
    CHECK(trilinear_sample(vol, (a + b) * 0.5) == doctest::Approx(0.5 * (vol.at(1, 2, 2) + vol.at(2, 2, 2))).epsilon(1e-7));

    Rng rng(11);
    for (int t = 0; t < 300; ++t) {
        Vec3 idx{rng.next_uniform() * (g.dims[0] - 1), rng.next_uniform() * (g.dims[1] - 1),
                 rng.next_uniform() * (g.dims[2] - 1)};
        Vec3 p = g.voxel_to_world(idx);
        CHECK(trilinear_sample(vol, p) == doctest::Approx(f(p)).epsilon(1e-5));
    }
}

TEST_CASE("trilinear names the violated axis") {
    Volume vol(make_grid({4, 4, 4}));
    try {
        trilinear_sample(vol, {1, 5.0, 1});
        FAIL("expected out_of_range");
    } catch (const std::out_of_range& e) {
        CHECK(std::string(e.what()).find("axis y") != std::string::npos);
    }
    CHECK_THROWS_AS(trilinear_sample(vol, {-0.1, 0, 0}), std::out_of_range);
    // exactly on the far face is in range
    CHECK_NOTHROW(trilinear_sample(vol, {3.0, 3.0, 3.0}));
}

TEST_CASE("nifti: identity header round trip, bit-identical data") {
    GridInfo g = make_grid({8, 8, 8});
    Volume vol(g);
    Rng rng(99);
    for (auto& v : vol.data) v = static_cast<float>(rng.next_normal());
    auto path = tmp_file("roundtrip.nii");
    save_nifti(vol, path.string());
    Volume back = load_nifti_volume(path.string());
    CHECK(back.dims == vol.dims);
    CHECK(back.spacing == vol.spacing);
    CHECK(back.origin == vol.origin);
    REQUIRE(back.data.size() == vol.data.size());
    CHECK(std::memcmp(back.data.data(), vol.data.data(), vol.data.size() * 4) == 0);
}

TEST_CASE("nifti: mask round trip and single foreground voxel") {
    BinaryMask mask(make_grid({4, 4, 4}, {1.5, 1.5, 1.5}, {3, 2, 1}));
    mask.set(2, 1, 3, true);
    auto path = tmp_file("mask.nii");
    save_nifti(mask, path.string());
    BinaryMask back = load_nifti_mask(path.string());
    CHECK(back.data == mask.data);
    CHECK(back.spacing == mask.spacing);
    CHECK(back.origin == mask.origin);
}

TEST_CASE("nifti: header fields follow the external format spec") {
    // independent reader: parse the raw bytes, not via load_nifti
    Volume vol(make_grid({4, 4, 4}, {1.5, 1.5, 1.5}));
    auto path = tmp_file("header.nii");
    save_nifti(vol, path.string());

    std::ifstream in(path, std::ios::binary);
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(raw.size() == 352 + 4ull * 4 * 4 * 4);

    CHECK(std::memcmp(raw.data() + 344, "n+1\0", 4) == 0);  // magic at offset 344
    int32_t sizeof_hdr;
    std::memcpy(&sizeof_hdr, raw.data(), 4);
    CHECK(sizeof_hdr == 348);
    float pixdim[4];
    std::memcpy(pixdim, raw.data() + 76, 16);
    CHECK(pixdim[1] == 1.5f);
    CHECK(pixdim[2] == 1.5f);
    CHECK(pixdim[3] == 1.5f);
    int16_t datatype;
    std::memcpy(&datatype, raw.data() + 70, 2);
    CHECK(datatype == 16);  // float32
}

TEST_CASE("nifti: rejects rotation, bad datatype, compression") {
    Volume vol(make_grid({4, 4, 4}));
    auto path = tmp_file("reject.nii");
    save_nifti(vol, path.string());

    // inject a rotation into srow_y (offset 296: srow_y[0])
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        float v = 0.3f;
        f.seekp(296);
        f.write(reinterpret_cast<char*>(&v), 4);
    }
    try {
        load_nifti_volume(path.string());
        FAIL("expected rejection");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("non-axis-aligned affine") != std::string::npos);
    }

    // unsupported datatype code 64 (float64)
    save_nifti(vol, path.string());
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        int16_t dt = 64;
        f.seekp(70);
        f.write(reinterpret_cast<char*>(&dt), 2);
    }
    try {
        load_nifti_volume(path.string());
        FAIL("expected rejection");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("datatype") != std::string::npos);
    }

    // gzip magic
    auto gz = tmp_file("fake.nii");
    {
        std::ofstream f(gz, std::ios::binary);
        const unsigned char m[4] = {0x1f, 0x8b, 0x08, 0x00};
        f.write(reinterpret_cast<const char*>(m), 4);
    }
    try {
        load_nifti_volume(gz.string());
        FAIL("expected rejection");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("compress") != std::string::npos);
    }
}

TEST_CASE("nifti: int16 converts to float, nonzero becomes mask foreground") {
    // write an int16 file by patching a saved volume is fiddly; build one by hand
    auto path = tmp_file("int16.nii");
    Volume vol(make_grid({2, 2, 2}));
    save_nifti(vol, path.string());
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        int16_t dt = 4, bitpix = 16;
        f.seekp(70);
        f.write(reinterpret_cast<char*>(&dt), 2);
        f.write(reinterpret_cast<char*>(&bitpix), 2);
        int16_t vals[8] = {-5, 0, 3, 0, 7, 0, 0, 1};
        f.seekp(352);
        f.write(reinterpret_cast<char*>(vals), 16);
    }
    Volume v = load_nifti_volume(path.string());
    CHECK(v.data[0] == -5.0f);
    CHECK(v.data[2] == 3.0f);
    BinaryMask m = load_nifti_mask(path.string());
    CHECK(m.data[0] == 1);
    CHECK(m.data[1] == 0);
    CHECK(m.data[7] == 1);
}
