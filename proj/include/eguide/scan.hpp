#pragma once

// Stability scans: beam transmission over a grid of drive points, either the
// raw (V, Omega) grid or the derived (q, U) grid, plus cliff extraction.

#include <cstdint>
#include <vector>

#include "eguide/field.hpp"
#include "eguide/geometry.hpp"
#include "eguide/tracking.hpp"

namespace eguide {

enum class GridKind {
    voltage_frequency, // first: V [V], second: Omega [rad/s]
    q_depth,           // first: q, second: U [eV]
};

const char* to_string(GridKind k);

struct ScanGrid {
    GridKind kind = GridKind::q_depth;
    std::vector<double> first;
    std::vector<double> second;

    /// Non-empty, strictly increasing, positive axes.
    void validate() const;
    std::size_t size() const { return first.size() * second.size(); }
    friend bool operator==(const ScanGrid&, const ScanGrid&) = default;
};

/// Evenly spaced axis with n points from lo to hi inclusive.
std::vector<double> linear_axis(double lo, double hi, int n);

/// Geometric factors of a layout; independent of the drive.
struct TrapFactors {
    double eta = 0.0;
    double u = 0.0;
    double guide_height = 0.0;
    friend bool operator==(const TrapFactors&, const TrapFactors&) = default;
};

/// Characterizes `source` once at a reference drive and returns (eta, u, R).
TrapFactors trap_factors(const FieldSource& source);

struct ScanCell {
    std::size_t i_first = 0;
    std::size_t i_second = 0;
    double amplitude = 0.0;
    double omega = 0.0;
    double q = 0.0;
    double depth_ev = 0.0;
    std::uint64_t seed = 0;
    TransmissionResult result;
};

struct StabilityScan {
    ScanGrid grid;
    TrapFactors factors;
    BeamSpec beam;
    TrackingMode mode = TrackingMode::comoving_2d;
    std::uint64_t seed = 0;
    /// Row-major in (first, second).
    std::vector<ScanCell> cells;

    const ScanCell& at(std::size_t i_first, std::size_t i_second) const
    {
        return cells.at(i_first * grid.second.size() + i_second);
    }
};

struct ScanOptions {
    TransmitOptions transmit;
    int threads = 1;
};

/// Runs transmit_beam on every cell. Cell k uses derive_seed(seed, k) and the
/// result does not depend on the thread count.
StabilityScan stability_scan(const BeamSpec& beam, const FieldSource& source, const TrapFactors& factors,
                             const GuidePath& path, const ScanGrid& grid, TrackingMode mode, std::uint64_t seed,
                             const ScanOptions& options = {});

/// Cliff positions read off a q_depth scan.
struct CliffAnalysis {
    double plateau = 0.0;          // largest cell transmission
    double threshold = 0.0;        // absolute transmission level defining a cliff
    double u_min_ev = 0.0;         // median over q columns with q <= q_max_for_umin; NaN if none
    double q_cliff = 0.0;          // median over U rows with U >= 1.5 u_min; NaN if none
    bool low_q_persists = false;   // lowest-q column guides for every U >= 1.5 u_min
    int columns_used = 0;
    int rows_used = 0;
};

struct CliffOptions {
    double threshold_fraction = 0.5; // of the plateau
    double q_max_for_umin = 0.6;
    friend bool operator==(const CliffOptions&, const CliffOptions&) = default;
};

CliffAnalysis analyze_cliffs(const StabilityScan& scan, const CliffOptions& options = {});

} // namespace eguide
