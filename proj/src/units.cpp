#include "rydpol/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "rydpol/errors.hpp"

namespace rydpol::units {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double length_scale(std::string_view u) {
  static const std::map<std::string_view, double> table = {
      {"um", 1.0},   {"µm", 1.0}, {"μm", 1.0}, {"nm", 1e-3},
      {"mm", 1e3},   {"cm", 1e4}, {"m", 1e6},
  };
  auto it = table.find(u);
  return it == table.end() ? NAN : it->second;
}

double time_scale(std::string_view u) {
  static const std::map<std::string_view, double> table = {
      {"us", 1.0}, {"µs", 1.0}, {"μs", 1.0}, {"ns", 1e-3}, {"ms", 1e3}, {"s", 1e6},
  };
  auto it = table.find(u);
  return it == table.end() ? NAN : it->second;
}

double frequency_scale(std::string_view u) {
  static const std::map<std::string_view, double> table = {
      {"MHz", 1.0}, {"kHz", 1e-3}, {"GHz", 1e3}, {"Hz", 1e-6},
  };
  auto it = table.find(u);
  return it == table.end() ? NAN : it->second;
}

// Splits "a/b" or "a*b^k" style compound units. Only the handful of forms
// needed by the config format are recognized.
double compound_scale(std::string_view u, Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless:
      return u.empty() ? 1.0 : NAN;
    case Dimension::Length:
      return length_scale(u);
    case Dimension::Time:
      return time_scale(u);
    case Dimension::Frequency:
      return frequency_scale(u);
    case Dimension::Velocity: {
      auto slash = u.find('/');
      if (slash == std::string_view::npos) return NAN;
      return length_scale(trim(u.substr(0, slash))) / time_scale(trim(u.substr(slash + 1)));
    }
    case Dimension::C6: {
      // "MHz um^6" or "MHz*um^6"
      auto sep = u.find_first_of(" *·");
      if (sep == std::string_view::npos) return NAN;
      auto f = trim(u.substr(0, sep));
      auto l = trim(u.substr(sep + 1));
      if (l.size() < 3 || l.substr(l.size() - 2) != "^6") return NAN;
      return frequency_scale(f) * std::pow(length_scale(l.substr(0, l.size() - 2)), 6);
    }
    case Dimension::Coupling: {
      auto sep = u.find_first_of(" *·");
      if (sep == std::string_view::npos) return NAN;
      auto f = trim(u.substr(0, sep));
      auto l = trim(u.substr(sep + 1));
      const std::string_view suffix = "^0.5";
      if (l.size() <= suffix.size() || l.substr(l.size() - suffix.size()) != suffix) return NAN;
      return frequency_scale(f) * std::sqrt(length_scale(l.substr(0, l.size() - suffix.size())));
    }
  }
  return NAN;
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim) {
  auto s = trim(text);
  if (s.empty()) throw ConfigError("", "empty value");
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc()) throw ConfigError("", "not a number: '" + std::string(s) + "'");
  auto unit = trim(std::string_view(ptr, static_cast<size_t>(end - ptr)));
  if (unit.empty()) return value;
  double scale = compound_scale(unit, dim);
  if (!std::isfinite(scale)) {
    throw ConfigError("", "unit '" + std::string(unit) + "' not valid for quantity in " +
                              std::string(internal_unit(dim)));
  }
  return value * scale;
}

std::string_view internal_unit(Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless: return "1";
    case Dimension::Length: return "um";
    case Dimension::Time: return "us";
    case Dimension::Frequency: return "MHz";
    case Dimension::Velocity: return "um/us";
    case Dimension::C6: return "MHz um^6";
    case Dimension::Coupling: return "MHz um^0.5";
  }
  return "?";
}

}  // namespace rydpol::units
