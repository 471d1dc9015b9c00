#pragma once

#include <vector>

#include "fci/geometry.hpp"
#include "fci/lanczos.hpp"
#include "fci/model.hpp"

namespace fci {

/// Piecewise-linear drive schedule over the dimensionless sweep time tau.
struct Schedule {
    struct Point {
        double tau, rabi, detuning;
    };
    std::vector<Point> breakpoints;  // tau strictly increasing, 0 to 1

    double rabi(double tau) const;
    double detuning(double tau) const;
    void validate() const;
    /// Start of the final segment on which the Rabi amplitude falls to zero.
    double final_descent_start() const;
};

/// Three segments: Rabi up at fixed detuning0, detuning ramp at fixed Rabi,
/// Rabi back to zero at fixed detuning1.
Schedule default_schedule(double detuning0, double detuning1, double rabi_max);

/// Concentric profile by graph distance from the open boundary: ring r gets
/// weights[r], the innermost rings reuse the last weight.  Boundary sites are
/// those with fewer than three nearest neighbors.
std::vector<double> ring_profile(const Cluster& cluster, const std::vector<double>& weights);

struct GapTraceRow {
    double tau, rabi, detuning;
    std::array<double, 4> gaps;  // E_m - E_0 for m = 1..4
    double density;              // mean total occupation per site
};
using GapTrace = std::vector<GapTraceRow>;

struct SweepModel {
    enum class Kind { full, effective } kind{Kind::effective};
    CouplingSet couplings;      // used when kind == full
    EffectiveParams effective;  // used when kind == effective
};

/// Quasi-static scan: at each tau assemble H(tau) = H_model + H_drive(tau)
/// in the grand-canonical sector and record the lowest k levels and density.
GapTrace gap_scan(const SweepModel& model, const Cluster& cluster,
                  const Schedule& schedule, const std::vector<double>& profile,
                  int n_tau, int k, const EigenOptions& opts = {});

struct CriticalPoint {
    double tau_c, rabi_c, min_gap;
};

/// Global minimum of E1 - E0 over the final Rabi-decreasing segment.
CriticalPoint critical_point(const GapTrace& trace, const Schedule& schedule);

}  // namespace fci
