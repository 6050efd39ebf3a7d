#include "contourqa/nifti.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace cqa {

namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

struct Nifti1Header {
    int32_t sizeof_hdr;
    char data_type[10];
    char db_name[18];
    int32_t extents;
    int16_t session_error;
    char regular;
    char dim_info;
    int16_t dim[8];
    float intent_p1, intent_p2, intent_p3;
    int16_t intent_code;
    int16_t datatype;
    int16_t bitpix;
    int16_t slice_start;
    float pixdim[8];
    float vox_offset;
    float scl_slope;
    float scl_inter;
    int16_t slice_end;
    char slice_code;
    char xyzt_units;
    float cal_max;
    float cal_min;
    float slice_duration;
    float toffset;
    int32_t glmax;
    int32_t glmin;
    char descrip[80];
    char aux_file[24];
    int16_t qform_code;
    int16_t sform_code;
    float quatern_b, quatern_c, quatern_d;
    float qoffset_x, qoffset_y, qoffset_z;
    float srow_x[4];
    float srow_y[4];
    float srow_z[4];
    char intent_name[16];
    char magic[4];
};

static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must pack to 348 bytes");
static_assert(offsetof(Nifti1Header, datatype) == 70);
static_assert(offsetof(Nifti1Header, pixdim) == 76);
static_assert(offsetof(Nifti1Header, vox_offset) == 108);
static_assert(offsetof(Nifti1Header, magic) == 344);

constexpr int16_t DT_UINT8 = 2;
constexpr int16_t DT_INT16 = 4;
constexpr int16_t DT_FLOAT32 = 16;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("nifti: " + path + ": " + what);
}

struct RawNifti {
    GridInfo grid;
    int16_t datatype = 0;
    std::vector<uint8_t> bytes;  // raw voxel payload
};

RawNifti read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");

    unsigned char magic2[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic2), 2);
    if (in.gcount() == 2 && magic2[0] == 0x1f && magic2[1] == 0x8b)
        fail(path, "gzip-compressed input not supported (expected uncompressed .nii)");
    in.seekg(0);

    Nifti1Header h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in) fail(path, "truncated header");
    if (h.sizeof_hdr != 348)
        fail(path, "sizeof_hdr=" + std::to_string(h.sizeof_hdr) + " (expected 348; NIfTI-2 or byte-swapped file?)");
    if (std::memcmp(h.magic, "n+1", 4) != 0) {
        if (std::memcmp(h.magic, "ni1", 4) == 0) fail(path, "magic 'ni1' (two-file .hdr/.img) not supported");
        fail(path, "magic field is not 'n+1'");
    }
    if (h.datatype != DT_UINT8 && h.datatype != DT_INT16 && h.datatype != DT_FLOAT32)
        fail(path, "unsupported datatype code " + std::to_string(h.datatype) + " (supported: 2, 4, 16)");
    if (h.dim[0] < 3) fail(path, "dim[0]=" + std::to_string(h.dim[0]) + " (need a 3D volume)");
    for (int a = 4; a <= h.dim[0] && a < 8; ++a)
        if (h.dim[a] > 1) fail(path, "dim[" + std::to_string(a) + "]>1: multi-frame volumes not supported");

    RawNifti out;
    for (int a = 0; a < 3; ++a) {
        out.grid.dims[a] = h.dim[a + 1];
        out.grid.spacing[a] = h.pixdim[a + 1];
    }

    if (h.sform_code > 0) {
        const float* rows[3] = {h.srow_x, h.srow_y, h.srow_z};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                if (r == c) {
                    if (rows[r][c] <= 0.0f) fail(path, "non-axis-aligned affine: srow diagonal must be positive");
                } else if (rows[r][c] != 0.0f) {
                    fail(path, "non-axis-aligned affine: rotation/shear in srow matrix");
                }
            }
        out.grid.origin = {rows[0][3], rows[1][3], rows[2][3]};
    } else if (h.qform_code > 0) {
        if (h.quatern_b != 0.0f || h.quatern_c != 0.0f || h.quatern_d != 0.0f)
            fail(path, "non-axis-aligned affine: non-identity quaternion in qform");
        if (h.pixdim[0] < 0.0f) fail(path, "non-axis-aligned affine: negative qfac");
        out.grid.origin = {h.qoffset_x, h.qoffset_y, h.qoffset_z};
    }
    // both codes zero: origin stays (0,0,0), spacing from pixdim

    validate_grid(out.grid);
    out.datatype = h.datatype;

    const size_t n = out.grid.voxel_count();
    const size_t bpp = (h.datatype == DT_UINT8) ? 1 : (h.datatype == DT_INT16) ? 2 : 4;
    long offset = static_cast<long>(h.vox_offset);
    if (offset < 348) fail(path, "vox_offset=" + std::to_string(offset) + " overlaps the header");
    in.seekg(offset);
    out.bytes.resize(n * bpp);
    in.read(reinterpret_cast<char*>(out.bytes.data()), static_cast<std::streamsize>(out.bytes.size()));
    if (!in) fail(path, "truncated voxel data");
    return out;
}

Nifti1Header make_header(const GridInfo& g, int16_t datatype, int16_t bitpix) {
    Nifti1Header h{};
    h.sizeof_hdr = 348;
    h.regular = 'r';
    h.dim[0] = 3;
    for (int a = 0; a < 3; ++a) h.dim[a + 1] = static_cast<int16_t>(g.dims[a]);
    for (int a = 4; a < 8; ++a) h.dim[a] = 1;
    h.datatype = datatype;
    h.bitpix = bitpix;
    h.pixdim[0] = 1.0f;
    for (int a = 0; a < 3; ++a) h.pixdim[a + 1] = static_cast<float>(g.spacing[a]);
    h.vox_offset = 352.0f;
    h.scl_slope = 1.0f;
    h.scl_inter = 0.0f;
    h.xyzt_units = 2;  // NIFTI_UNITS_MM
    h.qform_code = 0;
    h.sform_code = 1;  // NIFTI_XFORM_SCANNER_ANAT
    h.srow_x[0] = static_cast<float>(g.spacing[0]);
    h.srow_y[1] = static_cast<float>(g.spacing[1]);
    h.srow_z[2] = static_cast<float>(g.spacing[2]);
    h.srow_x[3] = static_cast<float>(g.origin[0]);
    h.srow_y[3] = static_cast<float>(g.origin[1]);
    h.srow_z[3] = static_cast<float>(g.origin[2]);
    std::memcpy(h.magic, "n+1", 4);
    return h;
}

void write_file(const std::string& path, const Nifti1Header& h, const void* payload, size_t bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("nifti: " + path + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    const char ext[4] = {0, 0, 0, 0};  // no header extensions
    out.write(ext, 4);
    out.write(reinterpret_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
    if (!out) throw std::runtime_error("nifti: " + path + ": write failed");
}

}  // namespace

Volume load_nifti_volume(const std::string& path) {
    RawNifti raw = read_raw(path);
    Volume vol(raw.grid);
    const size_t n = raw.grid.voxel_count();
    switch (raw.datatype) {
        case DT_FLOAT32:
            std::memcpy(vol.data.data(), raw.bytes.data(), n * 4);
            break;
        case DT_INT16: {
            const int16_t* src = reinterpret_cast<const int16_t*>(raw.bytes.data());
            for (size_t i = 0; i < n; ++i) vol.data[i] = static_cast<float>(src[i]);
            break;
        }
        case DT_UINT8:
            for (size_t i = 0; i < n; ++i) vol.data[i] = static_cast<float>(raw.bytes[i]);
            break;
    }
    return vol;
}

BinaryMask load_nifti_mask(const std::string& path) {
    RawNifti raw = read_raw(path);
    BinaryMask mask(raw.grid);
    const size_t n = raw.grid.voxel_count();
    switch (raw.datatype) {
        case DT_FLOAT32: {
            const float* src = reinterpret_cast<const float*>(raw.bytes.data());
            for (size_t i = 0; i < n; ++i) mask.data[i] = (src[i] != 0.0f) ? 1 : 0;
            break;
        }
        case DT_INT16: {
            const int16_t* src = reinterpret_cast<const int16_t*>(raw.bytes.data());
            for (size_t i = 0; i < n; ++i) mask.data[i] = (src[i] != 0) ? 1 : 0;
            break;
        }
        case DT_UINT8:
            for (size_t i = 0; i < n; ++i) mask.data[i] = (raw.bytes[i] != 0) ? 1 : 0;
            break;
    }
    return mask;
}

void save_nifti(const Volume& vol, const std::string& path) {
    validate_grid(vol);
    Nifti1Header h = make_header(vol, DT_FLOAT32, 32);
    write_file(path, h, vol.data.data(), vol.data.size() * 4);
}

void save_nifti(const BinaryMask& mask, const std::string& path) {
    validate_grid(mask);
    Nifti1Header h = make_header(mask, DT_UINT8, 8);
    write_file(path, h, mask.data.data(), mask.data.size());
}

}  // namespace cqa
