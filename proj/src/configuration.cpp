#include "zeroone/configuration.hpp"

#include <sstream>

namespace zeroone {

std::uint64_t Configuration::users() const {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

UserMask Configuration::support() const {
  UserMask m = 0;
  for (StateIndex q = 0; q < counts.size(); ++q)
    if (counts[q] > 0) m |= user_bit(q);
  return m;
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ c.ctrl;
  for (auto v : c.counts) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

AbstractConfiguration alpha(const Configuration& cfg) { return {cfg.ctrl, cfg.support()}; }

Configuration embed(const AbstractConfiguration& a, std::size_t num_user) {
  Configuration c{a.ctrl, std::vector<std::uint32_t>(num_user, 0)};
  for (StateIndex q = 0; q < num_user; ++q)
    if (has_user(a.occupied, q)) c.counts[q] = 1;
  return c;
}

bool wqo_leq(const Configuration& small, const Configuration& big) {
  if (small.ctrl != big.ctrl || small.counts.size() != big.counts.size()) return false;
  for (std::size_t q = 0; q < small.counts.size(); ++q) {
    if (small.counts[q] > big.counts[q]) return false;
    if ((small.counts[q] == 0) != (big.counts[q] == 0)) return false;
  }
  return true;
}

Configuration make_configuration(const Protocol& p, std::string_view ctrl,
                                 std::initializer_list<std::uint32_t> counts) {
  auto c = p.find_controller(ctrl);
  if (!c) throw ProtocolError("unknown controller state '" + std::string(ctrl) + "'");
  if (counts.size() != p.num_user()) throw ProtocolError("count vector has wrong length");
  return Configuration{*c, std::vector<std::uint32_t>(counts)};
}

AbstractConfiguration make_abstract(const Protocol& p, std::string_view ctrl,
                                    std::initializer_list<std::string_view> occupied) {
  auto c = p.find_controller(ctrl);
  if (!c) throw ProtocolError("unknown controller state '" + std::string(ctrl) + "'");
  UserMask m = 0;
  for (auto name : occupied) {
    auto q = p.find_user(name);
    if (!q) throw ProtocolError("unknown user state '" + std::string(name) + "'");
    m |= user_bit(*q);
  }
  return {*c, m};
}

std::string to_string(const Protocol& p, const Configuration& cfg) {
  std::ostringstream os;
  os << '(' << p.controller_states.at(cfg.ctrl) << ",(";
  for (std::size_t q = 0; q < cfg.counts.size(); ++q) os << (q ? "," : "") << cfg.counts[q];
  os << "))";
  return os.str();
}

std::string to_string(const Protocol& p, const AbstractConfiguration& a) {
  std::ostringstream os;
  os << '(' << p.controller_states.at(a.ctrl) << ",{";
  bool first = true;
  for (StateIndex q = 0; q < p.num_user(); ++q) {
    if (!has_user(a.occupied, q)) continue;
    os << (first ? "" : ",") << p.user_states[q];
    first = false;
  }
  os << "})";
  return os.str();
}

}  // namespace zeroone
