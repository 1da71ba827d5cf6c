#ifndef DPPO_TERRAIN_COURSE_HPP_
#define DPPO_TERRAIN_COURSE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dppo/terrain/heightfield.hpp"

namespace dppo::terrain {

enum class TerrainType { kFlat, kHurdles, kGaps, kPlatforms, kVariable, kMixed };

std::string to_string(TerrainType t);
TerrainType terrain_type_from_string(const std::string& s);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Range&) const = default;
};

// Stationary courses draw every obstacle parameter uniformly from its range.
// Curriculum courses draw from the sub-range
//   [lo + d (1 - spread) (hi - lo), lo + (d (1 - spread) + spread) (hi - lo)]
// where d = difficulty_at(obstacle start) rises linearly from `start` to `end`.
struct DifficultyProfile {
  bool curriculum = false;
  double start = 0.0;
  double end = 1.0;
  double spread = 0.3;
  bool operator==(const DifficultyProfile&) const = default;
};

struct CourseSpec {
  TerrainType type = TerrainType::kHurdles;
  double length = 60.0;
  double pixel = 0.1;
  double spawn = 4.0;       // flat run-up at the start
  Range spacing{2.0, 4.0};  // free ground before each obstacle
  Range hurdle_height{0.1, 0.5};
  Range hurdle_width{0.2, 0.4};
  Range gap_width{0.3, 1.0};
  Range platform_height{0.2, 0.6};
  Range platform_length{1.0, 3.0};
  Range variable_amplitude{0.05, 0.3};
  Range variable_feature{1.0, 3.0};
  DifficultyProfile difficulty;

  // Throws ConfigError: unordered ranges, nonpositive sizes, or a course too
  // short to hold the spawn zone and one minimally spaced obstacle.
  void validate() const;
  bool operator==(const CourseSpec&) const = default;
};

// Difficulty in [0, 1] used for an obstacle starting at x.
double difficulty_at(const CourseSpec& spec, double x);

// Record of one generated obstacle, for inspection and tests.
struct Obstacle {
  TerrainType type = TerrainType::kHurdles;
  double x0 = 0.0;
  double width = 0.0;
  double height = 0.0;      // hurdle or platform height, bump amplitude; 0 for gaps
  double difficulty = 0.0;
};

struct Course {
  Heightfield field;
  std::vector<Obstacle> obstacles;
};

// Deterministic in (spec, seed). Each obstacle's draws come from a stream
// keyed by (seed, obstacle index, field), and only exact arithmetic is used,
// so output is identical on every IEEE-754 platform.
Course generate(const CourseSpec& spec, std::uint64_t seed);
inline Heightfield generate_course(const CourseSpec& spec, std::uint64_t seed) {
  return generate(spec, seed).field;
}

}  // namespace dppo::terrain

#endif  // DPPO_TERRAIN_COURSE_HPP_
