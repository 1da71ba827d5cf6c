#ifndef DPPO_TERRAIN_HEIGHTFIELD_HPP_
#define DPPO_TERRAIN_HEIGHTFIELD_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace dppo::terrain {

// Piecewise-constant terrain. Pixel i covers [i * pixel, (i + 1) * pixel).
// Gap pixels keep the surrounding ground level in `ground` so relative
// heights stay meaningful; observers see the gap through `gap`.
struct Heightfield {
  double pixel = 0.1;
  std::vector<double> ground;
  std::vector<double> platform;        // height above ground, 0 where absent
  std::vector<std::uint8_t> has_platform;
  std::vector<std::uint8_t> gap;
  std::uint64_t seed = 0;

  static Heightfield flat(double length, double pixel = 0.1, double height = 0.0);

  std::size_t size() const { return ground.size(); }
  double length() const { return pixel * static_cast<double>(ground.size()); }
  // Index of the pixel containing x, clamped to the course. Abscissae within
  // 1e-9 pixels of a boundary resolve to the pixel on the right.
  std::size_t pixel_index(double x) const;
  double pixel_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * pixel; }

  // Throws FormatError if arrays disagree, heights are not finite or a
  // present platform is not above ground.
  void validate() const;
  bool operator==(const Heightfield&) const = default;
};

struct HeightQuery {
  bool gap = false;
  double ground = 0.0;
  bool has_platform = false;
  double platform = 0.0;  // height above ground
};

// Out-of-range x is clamped to the first or last pixel.
HeightQuery query_height(const Heightfield& hf, double x);

// Serialization: CSV (pixel index, ground height, platform height, gap
// flag), self-describing binary, and an SVG side profile.
std::string to_csv(const Heightfield& hf);
std::vector<std::uint8_t> to_binary(const Heightfield& hf);
Heightfield from_binary(const std::vector<std::uint8_t>& bytes);
std::string to_svg(const Heightfield& hf);

}  // namespace dppo::terrain

#endif  // DPPO_TERRAIN_HEIGHTFIELD_HPP_
