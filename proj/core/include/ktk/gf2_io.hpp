#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ktk/bit_matrix.hpp"
#include "ktk/permutation.hpp"

namespace ktk::io {

// .gf2m: "GF2M", version 0x01, rows u32 LE, cols u32 LE, then rows * ceil(cols/8)
// bytes row-major, LSB-first within each byte, padding bits zero.
// .perm: "PERM", version 0x01, n u32 LE, then n u32 LE images.

std::vector<std::uint8_t> encode_matrix(const BitMatrix& m);
BitMatrix decode_matrix(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_permutation(const Permutation& p);
Permutation decode_permutation(const std::vector<std::uint8_t>& bytes);

void write_matrix(const std::filesystem::path& path, const BitMatrix& m);
BitMatrix read_matrix(const std::filesystem::path& path);
void write_permutation(const std::filesystem::path& path, const Permutation& p);
Permutation read_permutation(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace ktk::io
