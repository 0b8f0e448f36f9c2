#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "certicos/knng.hpp"
#include "certicos/seeder.hpp"

namespace certicos {

/// On-disk index (C2IX, little-endian):
///   "C2IX" | u32 version=1 | u64 n | u32 d | u32 K
///   | n*K u32 adjacency | n f32 radii
///   | u32 m | u64 rng_seed | m*d f32 planes
///   | u32 bucket_count | bucket_count x (u32 code, u32 len, len x u32 ids)
///   | u64 crc
/// Buckets are written in ascending code order, ids ascending within each.
/// The checksum is CRC-64/XZ over everything after the version field and
/// before the checksum itself.
struct Index {
    KnnGraph graph;
    LshSeeder seeder;
};

void save_index(const Index& index, const std::string& path);
Index load_index(const std::string& path);

uint64_t crc64_xz(std::span<const uint8_t> bytes);

}  // namespace certicos
