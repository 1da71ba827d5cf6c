#include "dppo/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"

namespace dppo {

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + tmp + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw FormatError("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

}  // namespace dppo

namespace dppo::nn {

void Checkpoint::put(const std::string& tag, std::vector<std::uint8_t> payload) {
  sections_[tag] = std::move(payload);
}

void Checkpoint::put_params(const std::string& tag, const ParamVector& p) {
  ByteWriter w;
  p.write(w);
  put(tag, w.take());
}

const std::vector<std::uint8_t>& Checkpoint::get(const std::string& tag) const {
  auto it = sections_.find(tag);
  if (it == sections_.end()) throw FormatError("checkpoint has no section '" + tag + "'");
  return it->second;
}

ParamVector Checkpoint::get_params(const std::string& tag) const {
  ByteReader r(get(tag));
  ParamVector p = ParamVector::read(r);
  if (!r.done()) throw FormatError("trailing bytes in section '" + tag + "'");
  return p;
}

std::vector<std::uint8_t> Checkpoint::serialize() const {
  ByteWriter w;
  w.bytes({reinterpret_cast<const std::uint8_t*>(kMagic), 8});
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(sections_.size()));
  for (const auto& [tag, payload] : sections_) {
    w.str(tag);
    w.u64(payload.size());
    w.bytes(payload);
  }
  return w.take();
}

Checkpoint Checkpoint::deserialize(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  auto magic = r.bytes(8);
  if (std::memcmp(magic.data(), kMagic, 8) != 0) throw FormatError("not a checkpoint (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw FormatError("unsupported checkpoint format version " + std::to_string(version));
  }
  Checkpoint c;
  const std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string tag = r.str();
    const std::uint64_t len = r.u64();
    auto payload = r.bytes(len);
    c.sections_[tag] = std::vector<std::uint8_t>(payload.begin(), payload.end());
  }
  if (!r.done()) throw FormatError("trailing bytes after checkpoint sections");
  return c;
}

void Checkpoint::save(const std::string& path) const { write_file_bytes(path, serialize()); }

Checkpoint Checkpoint::load(const std::string& path) { return deserialize(read_file_bytes(path)); }

}  // namespace dppo::nn
