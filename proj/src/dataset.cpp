#include "contourqa/dataset.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cqa {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'R', '1'};
constexpr uint32_t kVersion = 1;

template <class T>
void append(std::vector<uint8_t>& buf, const T* data, size_t count) {
    const size_t at = buf.size();
    buf.resize(at + count * sizeof(T));
    std::memcpy(buf.data() + at, data, count * sizeof(T));
}

template <class T>
void take(const std::vector<uint8_t>& buf, size_t& at, T* data, size_t count) {
    if (at + count * sizeof(T) > buf.size()) throw std::runtime_error("record truncated");
    std::memcpy(data, buf.data() + at, count * sizeof(T));
    at += count * sizeof(T);
}

}  // namespace

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed) {
    const uint8_t* p = static_cast<const uint8_t*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

void save_sample(const GraphSample& sample, const std::string& path) {
    const uint32_t n = static_cast<uint32_t>(sample.num_nodes());
    const uint32_t e = static_cast<uint32_t>(sample.num_edges());
    if (sample.patches.size() != static_cast<size_t>(n) * kPatchVoxels ||
        sample.labels.size() != n || sample.signed_distances.size() != n ||
        sample.pseudo_coords.size() != e)
        throw std::invalid_argument("save_sample: inconsistent field sizes");

    std::vector<uint8_t> payload;
    append(payload, sample.node_positions.data(), n);
    append(payload, sample.patches.data(), sample.patches.size());
    append(payload, sample.edges.data(), e);
    append(payload, sample.pseudo_coords.data(), e);
    append(payload, sample.labels.data(), n);
    append(payload, sample.signed_distances.data(), n);
    const uint32_t prov_len = static_cast<uint32_t>(sample.provenance.size());
    append(payload, &prov_len, 1);
    append(payload, sample.provenance.data(), prov_len);

    const uint64_t hash = fnv1a64(payload.data(), payload.size());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_sample: cannot open " + path);
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&e), 4);
    out.write(reinterpret_cast<const char*>(&hash), 8);
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) throw std::runtime_error("save_sample: write failed for " + path);
}

GraphSample load_sample(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_sample: cannot open " + path);

    char magic[4];
    uint32_t version, n, e;
    uint64_t hash;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&e), 4);
    in.read(reinterpret_cast<char*>(&hash), 8);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_sample: " + path + ": not a graph-sample record");
    if (version != kVersion)
        throw std::runtime_error("load_sample: " + path + ": unsupported version " + std::to_string(version));

    std::vector<uint8_t> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (fnv1a64(payload.data(), payload.size()) != hash)
        throw std::runtime_error("load_sample: " + path + ": checksum mismatch (corrupted record)");

    GraphSample s;
    size_t at = 0;
    s.node_positions.resize(n);
    take(payload, at, s.node_positions.data(), n);
    s.patches.resize(static_cast<size_t>(n) * kPatchVoxels);
    take(payload, at, s.patches.data(), s.patches.size());
    s.edges.resize(e);
    take(payload, at, s.edges.data(), e);
    s.pseudo_coords.resize(e);
    take(payload, at, s.pseudo_coords.data(), e);
    s.labels.resize(n);
    take(payload, at, s.labels.data(), n);
    s.signed_distances.resize(n);
    take(payload, at, s.signed_distances.data(), n);
    uint32_t prov_len = 0;
    take(payload, at, &prov_len, 1);
    s.provenance.resize(prov_len);
    take(payload, at, s.provenance.data(), prov_len);
    return s;
}

void save_manifest(const DatasetManifest& m, const std::string& dir) {
    nlohmann::json j;
    j["format_version"] = m.format_version;
    j["config"] = nlohmann::json::parse(m.config_json.empty() ? "{}" : m.config_json);
    j["config_hash"] = m.config_hash;
    j["num_structures"] = m.num_structures;
    j["perturbations_per_structure"] = m.perturbations_per_structure;
    j["fold_of_structure"] = m.fold_of_structure;
    j["fold_count"] = m.fold_count;
    j["fold_seed"] = m.fold_seed;
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& r : m.records)
        recs.push_back({{"file", r.file},
                        {"structure", r.structure_id},
                        {"perturbation", r.perturbation},
                        {"checksum", r.checksum}});
    std::ofstream out(std::filesystem::path(dir) / "manifest.json", std::ios::trunc);
    if (!out) throw std::runtime_error("save_manifest: cannot write manifest.json in " + dir);
    out << j.dump(2) << "\n";
}

DatasetManifest load_manifest(const std::string& dir) {
    const auto path = std::filesystem::path(dir) / "manifest.json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_manifest: cannot open " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);

    DatasetManifest m;
    m.format_version = j.at("format_version").get<int>();
    m.config_json = j.at("config").dump();
    m.config_hash = j.at("config_hash").get<uint64_t>();
    m.num_structures = j.at("num_structures").get<int>();
    m.perturbations_per_structure = j.at("perturbations_per_structure").get<int>();
    m.fold_of_structure = j.at("fold_of_structure").get<std::vector<int>>();
    m.fold_count = j.at("fold_count").get<int>();
    m.fold_seed = j.at("fold_seed").get<uint64_t>();
    for (const auto& r : j.at("records")) {
        RecordInfo info;
        info.file = r.at("file").get<std::string>();
        info.structure_id = r.at("structure").get<int>();
        info.perturbation = r.at("perturbation").get<int>();
        info.checksum = r.at("checksum").get<uint64_t>();
        m.records.push_back(std::move(info));
    }
    return m;
}

uint64_t manifest_hash(const DatasetManifest& m) {
    uint64_t h = fnv1a64(m.config_json.data(), m.config_json.size());
    h = fnv1a64(&m.config_hash, 8, h);
    h = fnv1a64(m.fold_of_structure.data(), m.fold_of_structure.size() * sizeof(int), h);
    for (const auto& r : m.records) {
        h = fnv1a64(r.file.data(), r.file.size(), h);
        h = fnv1a64(&r.checksum, 8, h);
    }
    return h;
}

}  // namespace cqa
