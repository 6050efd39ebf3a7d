#include "contourqa/phantom.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "contourqa/perturb.hpp"
#include "contourqa/rng.hpp"

namespace cqa {

namespace {

// Smooth scalar field on the unit sphere, built by trilinear sampling of a smoothed
// white-noise box; normalized to roughly unit std by structured_noise itself.
struct SphereNoise {
    Volume field;

    static SphereNoise make(double sigma_mm, uint64_t seed) {
        GridInfo g;
        g.dims = {24, 24, 24};
        // box spans [-1.25, 1.25]^3 so unit directions stay inside
        g.spacing = {2.5 / 23.0, 2.5 / 23.0, 2.5 / 23.0};
        g.origin = {-1.25, -1.25, -1.25};
        NoiseConfig cfg;
        // sigma is given in organ mm; map it onto the unit box via a nominal 25 mm radius
        cfg.kernel_sigma_mm = sigma_mm / 25.0;
        cfg.target_std_mm = 1.0;
        cfg.seed = seed;
        return {structured_noise(g, cfg)};
    }

    double at(const Vec3& dir) const { return trilinear_sample(field, dir); }
};

void keep_largest_6connected(BinaryMask& mask) {
    const int nx = mask.dims[0], ny = mask.dims[1], nz = mask.dims[2];
    std::vector<int32_t> comp(mask.voxel_count(), -1);
    int best_comp = -1;
    size_t best_size = 0;
    int next = 0;
    std::deque<std::array<int, 3>> queue;
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                if (!mask.at(x, y, z) || comp[mask.index(x, y, z)] != -1) continue;
                const int id = next++;
                size_t size = 0;
                queue.push_back({x, y, z});
                comp[mask.index(x, y, z)] = id;
                while (!queue.empty()) {
                    auto [cx, cy, cz] = queue.front();
                    queue.pop_front();
                    ++size;
                    constexpr int d[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
                    for (const auto& dd : d) {
                        const int ux = cx + dd[0], uy = cy + dd[1], uz = cz + dd[2];
                        if (!mask.in_bounds(ux, uy, uz) || !mask.at(ux, uy, uz)) continue;
                        if (comp[mask.index(ux, uy, uz)] != -1) continue;
                        comp[mask.index(ux, uy, uz)] = id;
                        queue.push_back({ux, uy, uz});
                    }
                }
                if (size > best_size) {
                    best_size = size;
                    best_comp = id;
                }
            }
    for (size_t i = 0; i < mask.data.size(); ++i)
        if (mask.data[i] && comp[i] != best_comp) mask.data[i] = 0;
}

}  // namespace

Phantom generate_phantom(const PhantomConfig& cfg, uint64_t seed) {
    GridInfo grid;
    grid.dims = cfg.dims;
    grid.spacing = cfg.spacing;
    grid.origin = {0, 0, 0};
    validate_grid(grid);

    Rng rng(Rng::derive(seed, 0x70688));
    const Vec3 center = grid.voxel_to_world(
        {(grid.dims[0] - 1) * 0.5, (grid.dims[1] - 1) * 0.5, (grid.dims[2] - 1) * 0.5});

    double shrink = 1.0;
    for (int attempt = 0; attempt < 5; ++attempt, shrink *= 0.85) {
        // semi-axes, exponent, deformation field
        Vec3 radii{rng.next_uniform(cfg.radius_min_mm, cfg.radius_max_mm) * shrink,
                   rng.next_uniform(cfg.radius_min_mm, cfg.radius_max_mm) * shrink,
                   rng.next_uniform(cfg.radius_min_mm, cfg.radius_max_mm) * shrink};
        const double exponent = rng.next_uniform(cfg.exponent_min, cfg.exponent_max);
        const double amp = cfg.deform_amplitude * rng.next_uniform(0.5, 1.0);
        const SphereNoise deform = SphereNoise::make(cfg.deform_sigma_mm, Rng::derive(seed, 1));

        const double max_extent = std::max({radii.x, radii.y, radii.z}) * (1.0 + 2.0 * amp);
        bool fits = true;
        for (int a = 0; a < 3; ++a) {
            const double half_extent = (grid.dims[a] - 1) * 0.5 * grid.spacing[a];
            if (max_extent > half_extent - cfg.margin_voxels * grid.spacing[a]) fits = false;
        }
        if (!fits) continue;

        BinaryMask gt(grid);
        for (int z = 0; z < grid.dims[2]; ++z)
            for (int y = 0; y < grid.dims[1]; ++y)
                for (int x = 0; x < grid.dims[0]; ++x) {
                    const Vec3 p = grid.voxel_to_world({double(x), double(y), double(z)}) - center;
                    const double rn = norm(p);
                    if (rn > max_extent) continue;
                    // superellipsoid radial function with direction-dependent scale
                    const double rho = std::pow(std::pow(std::fabs(p.x / radii.x), exponent) +
                                                    std::pow(std::fabs(p.y / radii.y), exponent) +
                                                    std::pow(std::fabs(p.z / radii.z), exponent),
                                                1.0 / exponent);
                    const Vec3 dir = rn > 0 ? p / rn : Vec3{1, 0, 0};
                    const double scale = 1.0 + std::clamp(amp * deform.at(dir), -0.5, 0.5);
                    if (rho <= scale) gt.set(x, y, z, true);
                }
        keep_largest_6connected(gt);
        if (gt.foreground_count() < 32) continue;

        // CT: blurred two-level mean field + smooth texture + voxel noise
        const double organ_hu = cfg.organ_hu_mean + cfg.organ_hu_jitter * rng.next_normal();
        const double bg_hu = cfg.background_hu_mean + cfg.background_hu_jitter * rng.next_normal();

        Volume ct(grid);
        for (size_t i = 0; i < ct.data.size(); ++i) ct.data[i] = static_cast<float>(gt.data[i] ? organ_hu : bg_hu);
        {
            // mild PSF-like blur so the boundary carries sub-voxel information
            Volume blurred(grid);
            const double sigma_vox = 1.0;
            const int radius = 3;
            std::vector<double> k(2 * radius + 1);
            double sum = 0;
            for (int i = -radius; i <= radius; ++i) {
                k[i + radius] = std::exp(-0.5 * i * i / (sigma_vox * sigma_vox));
                sum += k[i + radius];
            }
            for (auto& w : k) w /= sum;
            Volume tmp = ct;
            for (int axis = 0; axis < 3; ++axis) {
                blurred = tmp;
                for (int z = 0; z < grid.dims[2]; ++z)
                    for (int y = 0; y < grid.dims[1]; ++y)
                        for (int x = 0; x < grid.dims[0]; ++x) {
                            double acc = 0;
                            for (int t = -radius; t <= radius; ++t) {
                                int q[3] = {x, y, z};
                                q[axis] = std::clamp(q[axis] + t, 0, grid.dims[axis] - 1);
                                acc += k[t + radius] * tmp.at(q[0], q[1], q[2]);
                            }
                            blurred.at(x, y, z) = static_cast<float>(acc);
                        }
                tmp = blurred;
            }
            ct = tmp;
        }
        {
            NoiseConfig tex;
            tex.kernel_sigma_mm = 8.0;
            tex.target_std_mm = 8.0;  // HU here, not mm
            tex.seed = Rng::derive(seed, 2);
            const Volume texture = structured_noise(grid, tex);
            for (size_t i = 0; i < ct.data.size(); ++i) ct.data[i] += texture.data[i];
        }
        Rng noise_rng(Rng::derive(seed, 3));
        for (auto& v : ct.data) v += static_cast<float>(cfg.voxel_noise_hu * noise_rng.next_normal());

        return {std::move(ct), std::move(gt)};
    }
    throw std::runtime_error("generate_phantom: organ does not fit the volume after bounded retries");
}

}  // namespace cqa
