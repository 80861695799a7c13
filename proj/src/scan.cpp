#include "eguide/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eguide/parallel.hpp"
#include "eguide/stability.hpp"

namespace eguide {

namespace {

double median(std::vector<double> v)
{
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Linear interpolation of the abscissa where y crosses `level` between two samples.
double crossing(double x0, double y0, double x1, double y1, double level)
{
    if (y1 == y0) return 0.5 * (x0 + x1);
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

void check_axis(const std::vector<double>& axis, const char* name)
{
    if (axis.empty()) throw DomainError(std::string("scan axis '") + name + "' is empty");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!(axis[i] > 0.0) || !std::isfinite(axis[i])) {
            throw DomainError(std::string("scan axis '") + name + "' must hold positive finite values");
        }
        if (i > 0 && !(axis[i] > axis[i - 1])) {
            throw DomainError(std::string("scan axis '") + name + "' must be strictly increasing");
        }
    }
}

} // namespace

const char* to_string(GridKind k) { return k == GridKind::voltage_frequency ? "voltage_frequency" : "q_depth"; }

void ScanGrid::validate() const
{
    const bool vf = kind == GridKind::voltage_frequency;
    check_axis(first, vf ? "voltage" : "q");
    check_axis(second, vf ? "omega" : "depth");
}

std::vector<double> linear_axis(double lo, double hi, int n)
{
    if (n < 1) throw DomainError("axis needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

TrapFactors trap_factors(const FieldSource& source)
{
    const DriveParams reference(1.0, kTwoPi * 1e9, 0.0);
    const auto tc = characterize_trap(source, reference);
    return {tc.eta, tc.u_factor, tc.guide_height};
}

StabilityScan stability_scan(const BeamSpec& beam, const FieldSource& source, const TrapFactors& factors,
                             const GuidePath& path, const ScanGrid& grid, TrackingMode mode, std::uint64_t seed,
                             const ScanOptions& options)
{
    grid.validate();
    beam.validate();
    StabilityScan scan;
    scan.grid = grid;
    scan.factors = factors;
    scan.beam = beam;
    scan.mode = mode;
    scan.seed = seed;
    scan.cells.resize(grid.size());

    const std::size_t n2 = grid.second.size();
    for (std::size_t k = 0; k < scan.cells.size(); ++k) {
        ScanCell& c = scan.cells[k];
        c.i_first = k / n2;
        c.i_second = k % n2;
        c.seed = derive_seed(seed, k);
        const double a = grid.first[c.i_first];
        const double b = grid.second[c.i_second];
        if (grid.kind == GridKind::voltage_frequency) {
            c.amplitude = a;
            c.omega = b;
        } else {
            const auto dp = drive_for(a, b, factors.eta, factors.u, factors.guide_height);
            c.amplitude = dp.amplitude;
            c.omega = dp.omega;
        }
        const DriveParams drive(c.amplitude, c.omega, 0.0);
        c.q = q_parameter(drive, factors.guide_height, factors.eta);
        c.depth_ev = depth_from_u(factors.u, drive, factors.guide_height);
    }

    TransmitOptions per_cell = options.transmit;
    per_cell.threads = 1;
    if (per_cell.axis_height <= 0.0) per_cell.axis_height = factors.guide_height;
    parallel_for(scan.cells.size(), options.threads, [&](std::size_t k) {
        ScanCell& c = scan.cells[k];
        c.result = transmit_beam(beam, source, DriveParams(c.amplitude, c.omega, 0.0), path, mode, c.seed, per_cell);
    });
    return scan;
}

CliffAnalysis analyze_cliffs(const StabilityScan& scan, const CliffOptions& options)
{
    if (scan.grid.kind != GridKind::q_depth) throw DomainError("cliff analysis needs a q_depth grid");
    const auto& qs = scan.grid.first;
    const auto& us = scan.grid.second;
    CliffAnalysis r;
    for (const auto& c : scan.cells) r.plateau = std::max(r.plateau, c.result.transmitted_fraction);
    r.threshold = options.threshold_fraction * r.plateau;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (r.plateau <= 0.0) {
        r.u_min_ev = r.q_cliff = nan;
        return r;
    }
    auto t = [&](std::size_t i, std::size_t j) { return scan.at(i, j).result.transmitted_fraction; };

    // U_min: lowest depth at which a q column first reaches the threshold.
    std::vector<double> umins;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (qs[i] > options.q_max_for_umin) continue;
        for (std::size_t j = 0; j < us.size(); ++j) {
            if (t(i, j) >= r.threshold) {
                if (j > 0) umins.push_back(crossing(us[j - 1], t(i, j - 1), us[j], t(i, j), r.threshold));
                break;
            }
        }
    }
    r.columns_used = int(umins.size());
    r.u_min_ev = median(umins);

    // q cliff: last guided q along each sufficiently deep row.
    std::vector<double> qcliffs;
    const double deep = std::isnan(r.u_min_ev) ? 0.0 : 1.5 * r.u_min_ev;
    for (std::size_t j = 0; j < us.size(); ++j) {
        if (us[j] < deep) continue;
        std::size_t last = qs.size();
        for (std::size_t i = 0; i < qs.size(); ++i) {
            if (t(i, j) >= r.threshold) last = i;
        }
        if (last == qs.size() || last + 1 == qs.size()) continue;
        qcliffs.push_back(crossing(qs[last], t(last, j), qs[last + 1], t(last + 1, j), r.threshold));
    }
    r.rows_used = int(qcliffs.size());
    r.q_cliff = median(qcliffs);

    bool persists = false;
    if (!std::isnan(r.u_min_ev)) {
        persists = true;
        bool any = false;
        for (std::size_t j = 0; j < us.size(); ++j) {
            if (us[j] < deep) continue;
            any = true;
            if (t(0, j) < r.threshold) persists = false;
        }
        persists = persists && any;
    }
    r.low_q_persists = persists;
    return r;
}

} // namespace eguide
