#pragma once

// Quantity parsing at the configuration boundary. A quantity is either a bare
// JSON number (already SI) or a string "<number> <unit>".

#include <string>

#include <json.hpp>

namespace eguide::app {

enum class Dimension {
    length,    // m, mm, um, nm
    voltage,   // V, mV, kV
    energy,    // eV, meV, J
    frequency, // Hz, kHz, MHz, GHz (ordinary frequency)
    angle,     // rad, deg
    time,      // s, ms, us, ns
    dimensionless,
};

const char* to_string(Dimension d);

/// SI value of `text`; throws DomainError naming the accepted units.
double parse_quantity(const std::string& text, Dimension dim);
double parse_quantity(const nlohmann::json& value, Dimension dim);
inline double parse_quantity(const char* text, Dimension dim) { return parse_quantity(std::string(text), dim); }

} // namespace eguide::app
