#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contourqa/graphbuild.hpp"

namespace cqa {

// Graph-sample record, little-endian binary:
//   magic "GSR1" | u32 version | u32 N | u32 E | u64 payload hash (FNV-1a 64)
//   positions  N x 3 f32
//   patches    N x 125 f32
//   edges      E x 2 u32
//   pseudo     E x 3 f32
//   labels     N u8
//   distances  N f32
//   provenance u32 length + UTF-8 JSON
// The hash covers everything after the header; load verifies it and rejects
// corrupted records.

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ull);

void save_sample(const GraphSample& sample, const std::string& path);
GraphSample load_sample(const std::string& path);

// Manifest entry for one record.
struct RecordInfo {
    std::string file;        // relative to the dataset directory
    int structure_id = 0;    // ground-truth structure the perturbation came from
    int perturbation = 0;    // perturbation index within the structure
    uint64_t checksum = 0;   // payload hash, duplicated in the manifest
};

struct DatasetManifest {
    int format_version = 1;
    std::string config_json;            // full generation config (canonical dump)
    uint64_t config_hash = 0;
    int num_structures = 0;
    int perturbations_per_structure = 0;
    std::vector<int> fold_of_structure;  // FoldPlan: structure id -> fold
    int fold_count = 0;
    uint64_t fold_seed = 0;
    std::vector<RecordInfo> records;
};

void save_manifest(const DatasetManifest& m, const std::string& dir);
DatasetManifest load_manifest(const std::string& dir);

// Content hash of the manifest (configs + record checksums); equal hashes mean an
// identical dataset.
uint64_t manifest_hash(const DatasetManifest& m);

}  // namespace cqa
