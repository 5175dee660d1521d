#include "oldb2d/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <vector>

#include "oldb2d/errors.hpp"

namespace oldb2d {

namespace {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&v, bytes, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  template <class T>
  void put(T v) {
    v = to_little(v);
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::vector<char>& data() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(std::vector<char> data, std::string path) : buf_(std::move(data)), path_(std::move(path)) {}

  template <class T>
  T get(const char* what) {
    need(sizeof(T), what);
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return to_little(v);
  }
  std::string bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n, const char* what) {
    if (buf_.size() - pos_ < n)
      throw FormatError("snapshot '" + path_ + "' truncated while reading " + what);
  }
  std::vector<char> buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

const char* const kFieldNames[] = {"u1", "u2", "a", "b", "c", "rho"};

}  // namespace

void write_snapshot(const SimState& state, const std::string& path) {
  const SpectralGrid& g = state.grid();
  Writer w;
  w.bytes(kSnapshotMagic, 8);
  w.put<std::uint32_t>(kSnapshotVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.n()));
  w.put<double>(g.length());
  w.put<double>(state.time);
  w.put<std::uint32_t>(6);
  const ScalarField* fields[] = {&state.u.x,      &state.u.y,      &state.stress.a,
                                 &state.stress.b, &state.stress.c, &state.rho};
  for (int f = 0; f < 6; ++f) {
    const std::size_t len = std::strlen(kFieldNames[f]);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(len));
    w.bytes(kFieldNames[f], len);
    for (double v : fields[f]->values()) w.put<double>(v);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
  if (!out) throw FormatError("write to '" + path + "' failed");
}

SimState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot '" + path + "'");
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data), path);

  if (r.bytes(8, "magic") != std::string(kSnapshotMagic, 8))
    throw FormatError("'" + path + "' is not a snapshot (bad magic)");
  const auto version = r.get<std::uint32_t>("version");
  if (version != kSnapshotVersion)
    throw FormatError("unsupported snapshot version " + std::to_string(version));
  const auto n = r.get<std::uint32_t>("n");
  const double length = r.get<double>("L");
  const double time = r.get<double>("time");
  const auto count = r.get<std::uint32_t>("field count");
  if (n < 8 || n % 2 != 0 || n > 1u << 15 || !(length > 0.0))
    throw FormatError("snapshot header has an invalid grid");
  const SpectralGrid g = make_grid(static_cast<int>(n), length);

  std::map<std::string, ScalarField> fields;
  for (std::uint32_t f = 0; f < count; ++f) {
    const auto len = r.get<std::uint8_t>("field name length");
    std::string name = r.bytes(len, "field name");
    ScalarField field(g);
    for (double& v : field.values()) v = r.get<double>("field data");
    if (!fields.emplace(name, std::move(field)).second)
      throw FormatError("snapshot repeats field '" + name + "'");
  }
  if (!r.done()) throw FormatError("snapshot has trailing bytes after " + std::to_string(count) + " fields");
  for (const char* name : kFieldNames)
    if (!fields.contains(name)) throw FormatError(std::string("snapshot lacks field '") + name + "'");
  return {time,
          {fields.at("u1"), fields.at("u2")},
          {fields.at("a"), fields.at("b"), fields.at("c")},
          fields.at("rho")};
}

SimState read_snapshot(const std::string& path, const SpectralGrid& grid) {
  SimState s = read_snapshot(path);
  if (!(s.grid() == grid))
    throw FormatError("snapshot grid (n=" + std::to_string(s.grid().n()) +
                      ") does not match the configured grid (n=" + std::to_string(grid.n()) + ")");
  return s;
}

}  // namespace oldb2d
