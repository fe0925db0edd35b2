#pragma once

#include <string>
#include <string_view>

// Internal unit system: lengths in µm, times in µs, frequencies in MHz
// (angular-free, i.e. the numbers of the half-width convention are used as
// rates directly). Light speed is therefore in µm/µs.
namespace rydpol::units {

enum class Dimension {
  Dimensionless,
  Length,
  Time,
  Frequency,
  Velocity,       // length / time
  C6,             // frequency * length^6
  Coupling,       // frequency * length^(1/2)
};

// Parses "<number> [unit]" and converts to the internal unit of `dim`.
// A bare number is taken to be in internal units already.
// Throws ConfigError (with an empty field name) on malformed input.
double parse_quantity(std::string_view text, Dimension dim);

std::string_view internal_unit(Dimension dim);

constexpr double kSpeedOfLight = 2.99792458e8;  // µm/µs

}  // namespace rydpol::units
