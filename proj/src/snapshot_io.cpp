#include "nsstab/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace nsstab {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'F', 'I', 'E', 'L', 'D', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kFlagDivergenceFree = 1;

static_assert(std::endian::native == std::endian::little, "snapshot files are little-endian");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("snapshot: truncated header");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path.string());
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kVersion);
  put<double>(out, field.grid().length());
  put<std::int32_t>(out, field.grid().points());
  put<std::int32_t>(out, field.grid().dim());
  put<std::int32_t>(out, field.components());
  put<std::int32_t>(out, field.is_spectral() ? 1 : 0);
  put<std::uint32_t>(out, field.divergence_free() ? kFlagDivergenceFree : 0u);
  put<double>(out, field.time());
  if (field.is_spectral()) {
    auto d = field.spectral_data();
    out.write(reinterpret_cast<const char*>(d.data()), std::streamsize(d.size() * sizeof(Complex)));
  } else {
    auto d = field.physical_data();
    out.write(reinterpret_cast<const char*>(d.data()), std::streamsize(d.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("snapshot: write failed for " + path.string());
}

Field read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("snapshot: bad magic in " + path.string());
  }
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("snapshot: unsupported version");
  const double L = get<double>(in);
  const int N = get<std::int32_t>(in);
  const int dim = get<std::int32_t>(in);
  const int comps = get<std::int32_t>(in);
  const int rep = get<std::int32_t>(in);
  const std::uint32_t flags = get<std::uint32_t>(in);
  const double time = get<double>(in);
  if (rep != 0 && rep != 1) throw std::runtime_error("snapshot: bad representation tag");
  Field f(make_grid(L, N, dim), comps, rep == 1 ? Representation::spectral : Representation::physical);
  if (f.is_spectral()) {
    auto d = f.spectral_data();
    in.read(reinterpret_cast<char*>(d.data()), std::streamsize(d.size() * sizeof(Complex)));
  } else {
    auto d = f.physical_data();
    in.read(reinterpret_cast<char*>(d.data()), std::streamsize(d.size() * sizeof(double)));
  }
  if (!in) throw std::runtime_error("snapshot: truncated data in " + path.string());
  f.set_divergence_free(flags & kFlagDivergenceFree);
  f.set_time(time);
  return f;
}

}  // namespace nsstab
