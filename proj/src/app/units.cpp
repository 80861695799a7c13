#include "eguide/app/units.hpp"

#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

#include "eguide/model.hpp"

namespace eguide::app {

namespace {

using UnitTable = std::vector<std::pair<const char*, double>>;

const UnitTable& table(Dimension d)
{
    static const UnitTable length{{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}, {"nm", 1e-9}};
    static const UnitTable voltage{{"V", 1.0}, {"mV", 1e-3}, {"kV", 1e3}};
    static const UnitTable energy{{"eV", 1.0}, {"meV", 1e-3}, {"J", 1.0 / PhysicalConstants::electron_charge}};
    static const UnitTable frequency{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
    static const UnitTable angle{{"rad", 1.0}, {"deg", kPi / 180.0}};
    static const UnitTable time{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}};
    static const UnitTable none{};
    switch (d) {
    case Dimension::length: return length;
    case Dimension::voltage: return voltage;
    case Dimension::energy: return energy;
    case Dimension::frequency: return frequency;
    case Dimension::angle: return angle;
    case Dimension::time: return time;
    case Dimension::dimensionless: return none;
    }
    return none;
}

std::string accepted(Dimension d)
{
    std::string s;
    for (const auto& [name, factor] : table(d)) {
        if (!s.empty()) s += ", ";
        s += name;
    }
    return s.empty() ? "none" : s;
}

} // namespace

const char* to_string(Dimension d)
{
    switch (d) {
    case Dimension::length: return "length";
    case Dimension::voltage: return "voltage";
    case Dimension::energy: return "energy";
    case Dimension::frequency: return "frequency";
    case Dimension::angle: return "angle";
    case Dimension::time: return "time";
    case Dimension::dimensionless: return "dimensionless";
    }
    return "?";
}

double parse_quantity(const std::string& text, Dimension dim)
{
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && *begin == ' ') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || !std::isfinite(value)) {
        throw DomainError("'" + text + "' does not start with a number");
    }
    std::string unit(ptr, end);
    while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
    while (!unit.empty() && unit.back() == ' ') unit.pop_back();
    if (unit.empty()) return value;
    for (const auto& [name, factor] : table(dim)) {
        if (unit == name) return value * factor;
    }
    throw DomainError("unit '" + unit + "' is not a " + to_string(dim) + " unit (accepted: " + accepted(dim) + ")");
}

double parse_quantity(const nlohmann::json& value, Dimension dim)
{
    if (value.is_number()) {
        const double v = value.get<double>();
        if (!std::isfinite(v)) throw DomainError("number is not finite");
        return v;
    }
    if (value.is_string()) return parse_quantity(value.get<std::string>(), dim);
    throw DomainError(std::string("expected a number or a quantity string for a ") + to_string(dim));
}

} // namespace eguide::app
