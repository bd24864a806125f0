#ifndef AEBSIM_FORMAT_HPP
#define AEBSIM_FORMAT_HPP

#include <charconv>
#include <string>

namespace aebsim {

/// Shortest round-trip decimal form of a double (locale-independent,
/// deterministic). Infinities print as "inf"/"-inf".
inline std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace aebsim

#endif  // AEBSIM_FORMAT_HPP
