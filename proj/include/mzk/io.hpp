#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mzk/evolution.hpp"
#include "mzk/field.hpp"

namespace mzk {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);
/// Checksum of a file's content; throws IoError if it cannot be read.
std::string file_checksum(const std::filesystem::path& path);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

/// Binary snapshot: "MZK1", u32 n_x, u32 n_y, f64 period_x, f64 period_y,
/// f64 t, n_x * n_y f64 values (row-major), then the FNV-1a 64 checksum of
/// every byte between the magic and the checksum. All little-endian.
void write_snapshot(const Field2D& field, double t, const std::filesystem::path& path);
std::string encode_snapshot(const Field2D& field, double t);
/// Throws FormatError on a bad magic, truncation (naming expected and actual
/// byte counts), trailing bytes or a checksum mismatch; IoError if the file
/// cannot be opened.
std::pair<Field2D, double> read_snapshot(const std::filesystem::path& path);
std::pair<Field2D, double> decode_snapshot(std::string_view bytes);

inline constexpr std::string_view kTrajectoryHeader = "t,mass,energy,grad_l2,hs_norm,linf,dt";

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
/// Reads the columns back; the outcome is not stored and is left as completed.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Writes text in one go; throws IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace mzk
