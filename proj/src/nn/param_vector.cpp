#include "dppo/nn/param_vector.hpp"

#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"

namespace dppo::nn {

void ParamLayout::append(std::string name, std::size_t size) {
  entries_.push_back({std::move(name), total_, size});
  total_ += size;
}

void ParamLayout::append(const std::string& prefix, const ParamLayout& other) {
  for (const auto& e : other.entries()) {
    entries_.push_back({prefix + e.name, total_ + e.offset, e.size});
  }
  total_ += other.total();
}

const LayoutEntry& ParamLayout::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  throw ShapeError("no layout entry named '" + name + "'");
}

void ParamLayout::write(ByteWriter& w) const {
  w.u32(static_cast<std::uint32_t>(entries_.size()));
  for (const auto& e : entries_) {
    w.str(e.name);
    w.u64(e.offset);
    w.u64(e.size);
  }
}

ParamLayout ParamLayout::read(ByteReader& r) {
  ParamLayout layout;
  const std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    LayoutEntry e;
    e.name = r.str();
    e.offset = r.u64();
    e.size = r.u64();
    if (e.offset != layout.total_) throw FormatError("layout entries not contiguous");
    layout.total_ += e.size;
    layout.entries_.push_back(std::move(e));
  }
  return layout;
}

void ParamVector::write(ByteWriter& w) const {
  w.u64(version);
  layout.write(w);
  w.f64_array(values);
}

ParamVector ParamVector::read(ByteReader& r) {
  ParamVector p;
  p.version = r.u64();
  p.layout = ParamLayout::read(r);
  p.values = r.f64_array();
  if (p.values.size() != p.layout.total()) {
    throw FormatError("parameter count does not match layout");
  }
  return p;
}

}  // namespace dppo::nn
