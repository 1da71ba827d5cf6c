#ifndef DPPO_NN_CHECKPOINT_HPP_
#define DPPO_NN_CHECKPOINT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dppo/nn/param_vector.hpp"

namespace dppo::nn {

// Versioned binary container used for every persisted artifact:
//
//   magic "DPPOCKPT" | u32 format version | u32 section count |
//   per section: str tag | u64 length | payload
//
// All integers and doubles are little-endian. Parameter payloads are a
// ParamVector: u64 version | layout descriptor | u64 n | n x f64.
class Checkpoint {
 public:
  static constexpr char kMagic[9] = "DPPOCKPT";
  static constexpr std::uint32_t kFormatVersion = 1;

  void put(const std::string& tag, std::vector<std::uint8_t> payload);
  void put_params(const std::string& tag, const ParamVector& p);
  bool has(const std::string& tag) const { return sections_.count(tag) != 0; }
  const std::vector<std::uint8_t>& get(const std::string& tag) const;
  ParamVector get_params(const std::string& tag) const;

  std::vector<std::uint8_t> serialize() const;
  static Checkpoint deserialize(const std::vector<std::uint8_t>& bytes);

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

  const std::map<std::string, std::vector<std::uint8_t>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::vector<std::uint8_t>> sections_;
};

}  // namespace dppo::nn

#endif  // DPPO_NN_CHECKPOINT_HPP_
