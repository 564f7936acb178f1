#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "imra/grid.hpp"
#include "imra/transform.hpp"

namespace imra {

constexpr std::uint32_t kGridFormatVersion = 1;

/// Grid file layout, little-endian: "IMRA", u32 version, u8 dim, i32 level,
/// per axis i64 lo and u64 extent, then the row-major binary64 payload.
std::vector<std::uint8_t> encode_grid(const GridFunction& grid);

/// Throws Error(Format) on a bad magic (naming the first four bytes), version,
/// dimension or trailing bytes, Error(Truncated) on short input and
/// Error(NonFinite) on NaN or infinite payload values.
GridFunction decode_grid(std::span<const std::uint8_t> bytes);

void write_grid(const std::filesystem::path& path, const GridFunction& grid);
GridFunction read_grid(const std::filesystem::path& path);

/// Pyramid directory: meta.json, c.imra and one d_<j>_<s-bits>.imra per
/// detail channel.
void write_pyramid(const std::filesystem::path& dir, const WaveletPyramid& pyr);
WaveletPyramid read_pyramid(const std::filesystem::path& dir);

/// The meta.json document written by write_pyramid.
std::string pyramid_meta(const WaveletPyramid& pyr);

std::string detail_file_name(int level, const Orientation& s);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace imra
