#include "dppo/terrain/course.hpp"

#include <algorithm>
#include <cmath>

#include "dppo/errors.hpp"
#include "dppo/rng.hpp"

namespace dppo::terrain {
namespace {

enum Field : std::uint64_t { kType = 0, kSpacing = 1, kWidth = 2, kHeight = 3, kSign = 4 };

double draw(std::uint64_t seed, std::uint64_t j, Field f) {
  return CounterRng::keyed(seed, {j, static_cast<std::uint64_t>(f)}).uniform();
}

double lerp(const Range& r, double t) { return r.lo + t * (r.hi - r.lo); }

void check_range(const Range& r, const char* name, bool positive) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    throw ConfigError(std::string("course range ") + name + " must be finite and ordered");
  }
  if (positive ? !(r.lo > 0.0) : r.lo < 0.0) {
    throw ConfigError(std::string("course range ") + name +
                      (positive ? " must be positive" : " must be nonnegative"));
  }
}

double min_feature(const CourseSpec& s, TerrainType t) {
  switch (t) {
    case TerrainType::kHurdles: return s.hurdle_width.lo;
    case TerrainType::kGaps: return s.gap_width.lo;
    case TerrainType::kPlatforms: return s.platform_length.lo;
    case TerrainType::kVariable: return s.variable_feature.lo;
    case TerrainType::kMixed:
      return std::min({s.hurdle_width.lo, s.gap_width.lo, s.platform_length.lo,
                       s.variable_feature.lo});
    case TerrainType::kFlat: return 0.0;
  }
  return 0.0;
}

// 16 u^2 (1 - u)^2: a smooth bump of unit height on [0, 1].
double bump(double u) {
  const double v = u * (1.0 - u);
  return 16.0 * v * v;
}

}  // namespace

std::string to_string(TerrainType t) {
  switch (t) {
    case TerrainType::kFlat: return "flat";
    case TerrainType::kHurdles: return "hurdles";
    case TerrainType::kGaps: return "gaps";
    case TerrainType::kPlatforms: return "platforms";
    case TerrainType::kVariable: return "variable";
    case TerrainType::kMixed: return "mixed";
  }
  return "?";
}

TerrainType terrain_type_from_string(const std::string& s) {
  for (auto t : {TerrainType::kFlat, TerrainType::kHurdles, TerrainType::kGaps,
                 TerrainType::kPlatforms, TerrainType::kVariable, TerrainType::kMixed}) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError("unknown terrain type '" + s +
                    "' (flat | hurdles | gaps | platforms | variable | mixed)");
}

void CourseSpec::validate() const {
  if (!(length > 0.0) || !(pixel > 0.0) || !(spawn >= 0.0)) {
    throw ConfigError("course length and pixel width must be positive, spawn nonnegative");
  }
  if (spawn > length) throw ConfigError("spawn zone is longer than the course");
  check_range(spacing, "spacing", false);
  check_range(hurdle_height, "hurdle_height", false);
  check_range(hurdle_width, "hurdle_width", true);
  check_range(gap_width, "gap_width", true);
  check_range(platform_height, "platform_height", true);
  check_range(platform_length, "platform_length", true);
  check_range(variable_amplitude, "variable_amplitude", false);
  check_range(variable_feature, "variable_feature", true);
  const auto& d = difficulty;
  if (!(d.start >= 0.0 && d.start <= 1.0 && d.end >= 0.0 && d.end <= 1.0)) {
    throw ConfigError("difficulty start and end must lie in [0, 1]");
  }
  if (d.start > d.end) throw ConfigError("curriculum difficulty must be nondecreasing");
  if (!(d.spread >= 0.0 && d.spread <= 1.0)) throw ConfigError("difficulty spread must lie in [0, 1]");
  if (type != TerrainType::kFlat && spawn + spacing.lo + min_feature(*this, type) > length) {
    throw ConfigError("course of length " + std::to_string(length) +
                      " m cannot fit one obstacle after the spawn zone");
  }
}

double difficulty_at(const CourseSpec& spec, double x) {
  const auto& d = spec.difficulty;
  if (!d.curriculum) return d.start;
  const double u = std::clamp(x / spec.length, 0.0, 1.0);
  return d.start + u * (d.end - d.start);
}

Course generate(const CourseSpec& spec, std::uint64_t seed) {
  spec.validate();
  Course out;
  Heightfield& hf = out.field;
  hf = Heightfield::flat(spec.length, spec.pixel);
  hf.seed = seed;
  if (spec.type == TerrainType::kFlat) return out;
  const std::size_t n = hf.size();
  const double px = spec.pixel;
  const bool cur = spec.difficulty.curriculum;
  const double spread = spec.difficulty.spread;
  double cursor = spec.spawn;
  for (std::uint64_t j = 0;; ++j) {
    TerrainType t = spec.type;
    if (t == TerrainType::kMixed) {
      static constexpr TerrainType kChoices[] = {TerrainType::kHurdles, TerrainType::kGaps,
                                                 TerrainType::kPlatforms, TerrainType::kVariable};
      const auto k = static_cast<std::size_t>(draw(seed, j, kType) * 4.0);
      t = kChoices[std::min<std::size_t>(k, 3)];
    }
    const double x_start = cursor + lerp(spec.spacing, draw(seed, j, kSpacing));
    const double d = difficulty_at(spec, x_start);
    auto frac = [&](Field f) {
      const double u = draw(seed, j, f);
      return cur ? d * (1.0 - spread) + spread * u : u;
    };
    double width = 0.0, height = 0.0;
    switch (t) {
      case TerrainType::kHurdles:
        width = lerp(spec.hurdle_width, draw(seed, j, kWidth));
        height = lerp(spec.hurdle_height, frac(kHeight));
        break;
      case TerrainType::kGaps:
        width = lerp(spec.gap_width, frac(kWidth));
        break;
      case TerrainType::kPlatforms:
        width = lerp(spec.platform_length, draw(seed, j, kWidth));
        height = lerp(spec.platform_height, frac(kHeight));
        break;
      case TerrainType::kVariable:
        width = lerp(spec.variable_feature, draw(seed, j, kWidth));
        height = lerp(spec.variable_amplitude, frac(kHeight));
        if (draw(seed, j, kSign) < 0.5) height = -height;
        break;
      default:
        break;
    }
    const auto p0 = static_cast<std::size_t>(std::llround(x_start / px));
    auto p1 = static_cast<std::size_t>(std::llround((x_start + width) / px));
    p1 = std::max(p1, p0 + 1);
    if (p1 > n) break;
    for (std::size_t i = p0; i < p1; ++i) {
      switch (t) {
        case TerrainType::kHurdles: hf.ground[i] += height; break;
        case TerrainType::kGaps: hf.gap[i] = 1; break;
        case TerrainType::kPlatforms:
          hf.has_platform[i] = 1;
          hf.platform[i] = height;
          break;
        case TerrainType::kVariable: {
          const double u = (static_cast<double>(i - p0) + 0.5) / static_cast<double>(p1 - p0);
          hf.ground[i] += height * bump(u);
          break;
        }
        default: break;
      }
    }
    out.obstacles.push_back(Obstacle{t, static_cast<double>(p0) * px,
                                     static_cast<double>(p1 - p0) * px, height, d});
    cursor = static_cast<double>(p1) * px;
  }
  return out;
}

}  // namespace dppo::terrain
