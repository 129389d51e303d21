#pragma once

// Angles on the command line carry an explicit unit: "90deg", "1.5708rad",
// "pi/2rad", "3*pi/4rad", "-45deg". Bare numbers are rejected.

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "interaural/stimulus.hpp"

namespace interaural::io {

namespace detail {

inline double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

// "<a>", "pi", "<a>*pi", "-pi", and any of these followed by "/<b>".
inline double parse_pi_expr(std::string s) {
  double denom = 1.0;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    denom = parse_number(s.substr(slash + 1));
    s = s.substr(0, slash);
  }
  double value = 0.0;
  if (const auto p = s.find("pi"); p != std::string::npos) {
    if (p + 2 != s.size()) throw std::invalid_argument("malformed angle expression");
    std::string coef = s.substr(0, p);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    const double c = coef.empty() ? 1.0 : coef == "-" ? -1.0 : coef == "+" ? 1.0 : parse_number(coef);
    value = c * kPi;
  } else {
    value = parse_number(s);
  }
  if (denom == 0.0) throw std::invalid_argument("division by zero in angle");
  return value / denom;
}

}  // namespace detail

/// Parses an angle with a mandatory "deg" or "rad" suffix; returns radians.
inline double parse_angle(const std::string& text) {
  auto ends_with = [&](const char* suf) {
    const std::string s(suf);
    return text.size() > s.size() && text.compare(text.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with("deg")) return detail::parse_pi_expr(text.substr(0, text.size() - 3)) * kPi / 180.0;
  if (ends_with("rad")) return detail::parse_pi_expr(text.substr(0, text.size() - 3));
  throw std::invalid_argument("angle '" + text + "' needs a unit suffix: deg or rad");
}

/// Short label for file names and column headers, e.g. "psi=90deg".
inline std::string angle_label(double rad) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6gdeg", rad * 180.0 / kPi);
  return buf;
}

}  // namespace interaural::io
