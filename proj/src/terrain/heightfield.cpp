#include "dppo/terrain/heightfield.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"

namespace dppo::terrain {
namespace {

constexpr char kMagic[] = "DPPOTERR";
constexpr std::uint32_t kVersion = 1;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

Heightfield Heightfield::flat(double length, double pixel, double height) {
  if (!(pixel > 0.0) || !(length > 0.0)) throw ConfigError("flat heightfield needs positive sizes");
  const auto n = static_cast<std::size_t>(std::llround(length / pixel));
  Heightfield hf;
  hf.pixel = pixel;
  hf.ground.assign(n, height);
  hf.platform.assign(n, 0.0);
  hf.has_platform.assign(n, 0);
  hf.gap.assign(n, 0);
  return hf;
}

std::size_t Heightfield::pixel_index(double x) const {
  if (ground.empty()) throw StateError("empty heightfield");
  const double u = std::floor(x / pixel + 1e-9);
  if (!(u > 0.0)) return 0;
  const double last = static_cast<double>(ground.size() - 1);
  return u >= last ? ground.size() - 1 : static_cast<std::size_t>(u);
}

void Heightfield::validate() const {
  const std::size_t n = ground.size();
  if (platform.size() != n || has_platform.size() != n || gap.size() != n) {
    throw FormatError("heightfield arrays have unequal lengths");
  }
  if (!(pixel > 0.0)) throw FormatError("heightfield pixel width must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(ground[i]) || !std::isfinite(platform[i])) {
      throw FormatError("heightfield height is not finite at pixel " + std::to_string(i));
    }
    if (has_platform[i] && !(platform[i] > 0.0)) {
      throw FormatError("platform must be above ground at pixel " + std::to_string(i));
    }
  }
}

HeightQuery query_height(const Heightfield& hf, double x) {
  const std::size_t i = hf.pixel_index(x);
  return HeightQuery{hf.gap[i] != 0, hf.ground[i], hf.has_platform[i] != 0, hf.platform[i]};
}

std::string to_csv(const Heightfield& hf) {
  std::string out = "pixel,ground,platform,gap\n";
  for (std::size_t i = 0; i < hf.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += num(hf.ground[i]);
    out += ',';
    out += num(hf.has_platform[i] ? hf.platform[i] : 0.0);
    out += ',';
    out += hf.gap[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> to_binary(const Heightfield& hf) {
  ByteWriter w;
  w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
  w.u32(kVersion);
  w.f64(hf.pixel);
  w.u64(hf.seed);
  w.f64_array(hf.ground);
  w.f64_array(hf.platform);
  w.u64(hf.size());
  for (std::size_t i = 0; i < hf.size(); ++i) {
    w.u8(static_cast<std::uint8_t>((hf.has_platform[i] ? 1 : 0) | (hf.gap[i] ? 2 : 0)));
  }
  return w.take();
}

Heightfield from_binary(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  const auto magic = r.bytes(8);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw FormatError("not a terrain file");
  if (r.u32() != kVersion) throw FormatError("unsupported terrain file version");
  Heightfield hf;
  hf.pixel = r.f64();
  hf.seed = r.u64();
  hf.ground = r.f64_array();
  hf.platform = r.f64_array();
  const std::uint64_t n = r.u64();
  if (n != hf.ground.size()) throw FormatError("terrain flag array has the wrong length");
  hf.has_platform.resize(n);
  hf.gap.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint8_t f = r.u8();
    hf.has_platform[i] = f & 1;
    hf.gap[i] = (f >> 1) & 1;
  }
  if (!r.done()) throw FormatError("trailing bytes after terrain data");
  hf.validate();
  return hf;
}

std::string to_svg(const Heightfield& hf) {
  // 50 px per meter, z up; a band of 3 m around ground level.
  const double s = 50.0;
  const double w = hf.length() * s;
  const double h = 4.0 * s;
  const double base = 3.0 * s;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(w) << "\" height=\""
     << fixed(h) << "\" viewBox=\"0 0 " << fixed(w) << ' ' << fixed(h) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < hf.size(); ++i) {
    const double x = static_cast<double>(i) * hf.pixel * s;
    const double pw = hf.pixel * s;
    if (!hf.gap[i]) {
      const double top = base - hf.ground[i] * s;
      os << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw)
         << "\" height=\"" << fixed(h - top) << "\" fill=\"#8c7a5b\"/>\n";
    }
    if (hf.has_platform[i]) {
      const double top = base - (hf.ground[i] + hf.platform[i]) * s;
      os << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw)
         << "\" height=\"" << fixed(0.15 * s) << "\" fill=\"#3b6ea5\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dppo::terrain
