#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "seedrel/common.hpp"
#include "seedrel/corpus.hpp"

// Graph snapshot layout (all integers little-endian):
//
//   "SDGR" u32 version
//   u64 node_count  u64 edge_count
//   node_count x record { i64 pub_id, i32 year (INT32_MIN = unknown),
//                         str title, u8 has_abstract, [str abstract],
//                         u32 n_headings, n_headings x str }
//   (node_count + 1) x u64 out offsets
//   edge_count x u32 out targets
//   u64 FNV-1a of every preceding byte
//
// where str = u32 byte length + bytes. Citer lists are rebuilt on load.

namespace seedrel {

inline constexpr std::array<char, 4> kSnapshotMagic = {'S', 'D', 'G', 'R'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

class SnapshotError : public Error {
 public:
  using Error::Error;
};

namespace detail {

class SnapshotWriter {
 public:
  explicit SnapshotWriter(std::ostream& out) : out_(out) {}

  void bytes(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    hash_ = stable_hash(std::string_view(static_cast<const char*>(p), n), hash_);
  }
  template <typename T>
  void put(T v) {
    static_assert(std::is_integral_v<T>);
    unsigned char buf[sizeof(T)];
    auto u = static_cast<std::make_unsigned_t<T>>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xFF);
    bytes(buf, sizeof(T));
  }
  void str(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void finish() {
    const auto h = hash_;
    put<std::uint64_t>(h);
  }

 private:
  std::ostream& out_;
  std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

class SnapshotReader {
 public:
  explicit SnapshotReader(std::istream& in) : in_(in) {}

  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw SnapshotError("snapshot truncated");
    hash_ = stable_hash(std::string_view(static_cast<const char*>(p), n), hash_);
  }
  template <typename T>
  T get() {
    unsigned char buf[sizeof(T)];
    bytes(buf, sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<std::make_unsigned_t<T>>(buf[i]) << (8 * i);
    return static_cast<T>(u);
  }
  std::string str() {
    const auto n = get<std::uint32_t>();
    if (n > (1u << 28)) throw SnapshotError("snapshot string length implausible");
    std::string s(n, '\0');
    if (n) bytes(s.data(), n);
    return s;
  }
  std::uint64_t hash() const { return hash_; }

 private:
  std::istream& in_;
  std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

}  // namespace detail

inline void save_snapshot(const CorpusGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot write snapshot " + path.string());
  detail::SnapshotWriter w(out);
  w.bytes(kSnapshotMagic.data(), kSnapshotMagic.size());
  w.put<std::uint32_t>(kSnapshotVersion);
  w.put<std::uint64_t>(g.node_count());
  w.put<std::uint64_t>(g.edge_count());
  for (const auto& r : g.records()) {
    w.put<std::int64_t>(r.pub_id);
    w.put<std::int32_t>(r.year ? *r.year : INT32_MIN);
    w.str(r.title);
    w.put<std::uint8_t>(r.abstract ? 1 : 0);
    if (r.abstract) w.str(*r.abstract);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(r.headings.size()));
    for (const auto& h : r.headings) w.str(h);
  }
  for (auto off : g.out_csr().offsets) w.put<std::uint64_t>(off);
  for (auto t : g.out_csr().targets) w.put<std::uint32_t>(t);
  w.finish();
  if (!out) throw SnapshotError("error writing snapshot " + path.string());
}

/// Throws SnapshotError on bad magic, a version mismatch, truncation or a
/// checksum mismatch; callers treat any of these as "cache invalid".
inline CorpusGraph load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot " + path.string());
  detail::SnapshotReader r(in);
  std::array<char, 4> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kSnapshotMagic) throw SnapshotError("not a graph snapshot (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion)
    throw SnapshotError("snapshot version " + std::to_string(version) + " != " + std::to_string(kSnapshotVersion));
  const auto n = r.get<std::uint64_t>();
  const auto e = r.get<std::uint64_t>();
  if (n >= kNoNode) throw SnapshotError("snapshot node count too large");

  std::vector<PublicationRecord> records(n);
  for (auto& rec : records) {
    rec.pub_id = r.get<std::int64_t>();
    const auto y = r.get<std::int32_t>();
    if (y != INT32_MIN) rec.year = y;
    rec.title = r.str();
    if (r.get<std::uint8_t>()) rec.abstract = r.str();
    const auto nh = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < nh; ++i) rec.headings.push_back(r.str());
  }
  Csr out;
  out.offsets.resize(n + 1);
  for (auto& off : out.offsets) off = r.get<std::uint64_t>();
  if (out.offsets.front() != 0 || out.offsets.back() != e) throw SnapshotError("snapshot offsets inconsistent");
  out.targets.resize(e);
  for (auto& t : out.targets) {
    t = r.get<std::uint32_t>();
    if (t >= n) throw SnapshotError("snapshot edge target out of range");
  }
  const auto expect = r.hash();
  if (r.get<std::uint64_t>() != expect) throw SnapshotError("snapshot checksum mismatch");
  for (std::size_t v = 0; v < n; ++v) {
    if (out.offsets[v] > out.offsets[v + 1]) throw SnapshotError("snapshot offsets inconsistent");
    for (auto k = out.offsets[v]; k < out.offsets[v + 1]; ++k)
      if (out.targets[k] == v || (k > out.offsets[v] && out.targets[k] <= out.targets[k - 1]))
        throw SnapshotError("snapshot adjacency not sorted");
  }
  return CorpusGraph(std::move(records), std::move(out));
}

}  // namespace seedrel
