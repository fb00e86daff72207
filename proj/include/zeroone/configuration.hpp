// configuration.hpp -- concrete and 01-abstract global states
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zeroone/protocol.hpp"

namespace zeroone {

/// Controller state plus a count per user state.
struct Configuration {
  StateIndex ctrl = 0;
  std::vector<std::uint32_t> counts;

  std::uint64_t users() const;
  /// 1 + number of user processes.
  std::uint64_t size() const { return 1 + users(); }
  UserMask support() const;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;
};

/// Controller state plus the set of occupied user states.
struct AbstractConfiguration {
  StateIndex ctrl = 0;
  UserMask occupied = 0;

  bool operator==(const AbstractConfiguration&) const = default;
  auto operator<=>(const AbstractConfiguration&) const = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

struct AbstractConfigurationHash {
  std::size_t operator()(const AbstractConfiguration& a) const noexcept {
    return std::hash<std::uint64_t>{}(a.occupied * 0x9E3779B97F4A7C15ULL ^ a.ctrl);
  }
};

AbstractConfiguration alpha(const Configuration& cfg);

/// The configuration with one process on each occupied state.
Configuration embed(const AbstractConfiguration& a, std::size_t num_user);

/// ⪯₀: same controller, pointwise ≤, and equal supports.
bool wqo_leq(const Configuration& small, const Configuration& big);

Configuration make_configuration(const Protocol& p, std::string_view ctrl,
                                 std::initializer_list<std::uint32_t> counts);
AbstractConfiguration make_abstract(const Protocol& p, std::string_view ctrl,
                                    std::initializer_list<std::string_view> occupied);

std::string to_string(const Protocol& p, const Configuration& cfg);
std::string to_string(const Protocol& p, const AbstractConfiguration& a);

}  // namespace zeroone
