#ifndef DPPO_NN_PARAM_VECTOR_HPP_
#define DPPO_NN_PARAM_VECTOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace dppo {
class ByteWriter;
class ByteReader;
}  // namespace dppo

namespace dppo::nn {

using Vector = std::vector<double>;

// Named slice of a flat parameter array.
struct LayoutEntry {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
  bool operator==(const LayoutEntry&) const = default;
};

// Maps contiguous slices of a flat parameter array to network components.
class ParamLayout {
 public:
  void append(std::string name, std::size_t size);
  // Appends every entry of `other`, prefixing its names and shifting offsets.
  void append(const std::string& prefix, const ParamLayout& other);

  std::size_t total() const { return total_; }
  const std::vector<LayoutEntry>& entries() const { return entries_; }
  const LayoutEntry& find(const std::string& name) const;

  void write(ByteWriter& w) const;
  static ParamLayout read(ByteReader& r);

  bool operator==(const ParamLayout&) const = default;

 private:
  std::vector<LayoutEntry> entries_;
  std::size_t total_ = 0;
};

// Flat versioned copy of all learnable parameters of one network.
struct ParamVector {
  std::uint64_t version = 0;
  Vector values;
  ParamLayout layout;

  std::size_t size() const { return values.size(); }

  void write(ByteWriter& w) const;
  static ParamVector read(ByteReader& r);
  bool operator==(const ParamVector&) const = default;
};

}  // namespace dppo::nn

#endif  // DPPO_NN_PARAM_VECTOR_HPP_
