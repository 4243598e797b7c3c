#include "mzk/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mzk/errors.hpp"

namespace mzk {

static_assert(std::endian::native == std::endian::little,
              "snapshot encoding assumes a little-endian host");

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  return fnv1a64(std::span(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
void put(std::string& out, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  out.append(raw, sizeof(T));
}

template <class T>
T get(std::string_view bytes, std::size_t& offset) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  offset += sizeof(T);
  return v;
}

constexpr std::string_view kMagic = "MZK1";
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8 + 8;

}  // namespace

std::string file_checksum(const std::filesystem::path& path) { return to_hex(fnv1a64(slurp(path))); }

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string encode_snapshot(const Field2D& field, double t) {
  const auto& g = field.grid();
  std::string out(kMagic);
  out.reserve(kHeaderBytes + 8 * g.size() + 8);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_x()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_y()));
  put<double>(out, g.period_x());
  put<double>(out, g.period_y());
  put<double>(out, t);
  out.append(reinterpret_cast<const char*>(field.physical().data()), 8 * g.size());
  put<std::uint64_t>(out, fnv1a64(std::string_view(out).substr(kMagic.size())));
  return out;
}

void write_snapshot(const Field2D& field, double t, const std::filesystem::path& path) {
  write_text(path, encode_snapshot(field, t));
}

std::pair<Field2D, double> decode_snapshot(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic)
    throw FormatError("not a snapshot: magic bytes differ from MZK1");
  if (bytes.size() < kHeaderBytes)
    throw FormatError("truncated snapshot header: expected at least " +
                      std::to_string(kHeaderBytes) + " bytes, got " + std::to_string(bytes.size()));
  std::size_t off = kMagic.size();
  const auto n_x = get<std::uint32_t>(bytes, off);
  const auto n_y = get<std::uint32_t>(bytes, off);
  const double px = get<double>(bytes, off);
  const double py = get<double>(bytes, off);
  const double t = get<double>(bytes, off);
  const std::size_t expected = kHeaderBytes + 8ULL * n_x * n_y + 8;
  if (bytes.size() < expected)
    throw FormatError("truncated snapshot: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  if (bytes.size() > expected)
    throw FormatError("snapshot has " + std::to_string(bytes.size() - expected) + " trailing bytes");
  const std::uint64_t stored = [&] {
    std::size_t o = expected - 8;
    return get<std::uint64_t>(bytes, o);
  }();
  if (fnv1a64(bytes.substr(kMagic.size(), expected - 8 - kMagic.size())) != stored)
    throw FormatError("snapshot checksum mismatch");

  SpectralGrid grid = make_grid(static_cast<int>(n_x), static_cast<int>(n_y), px, py);
  RealArray values(n_x, n_y);
  std::memcpy(values.data(), bytes.data() + kHeaderBytes, 8ULL * n_x * n_y);
  return {Field2D::from_physical(std::move(grid), std::move(values)), t};
}

std::pair<Field2D, double> read_snapshot(const std::filesystem::path& path) {
  return decode_snapshot(slurp(path));
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const TrajectoryRow r = traj.row(k);
    for (double v : {r.t, r.mass, r.energy, r.grad_l2, r.hs_norm, r.linf}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(r.dt);
    out += '\n';
  }
  write_text(path, out);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw FormatError(path.string() + ": trajectory header does not match the schema");
  Trajectory traj;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double v[7];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < 7; ++c) {
      auto [next, ec] = std::from_chars(p, end, v[c]);
      if (ec != std::errc()) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number");
      p = next;
      if (c < 6) {
        if (p == end || *p != ',') throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 7 columns");
        ++p;
      }
    }
    if (p != end) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": trailing content");
    traj.push({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return traj;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mzk
