#include "fci/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "fci/observables.hpp"

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("sweep", code, msg);
}

double interpolate(const std::vector<Schedule::Point>& pts, double tau,
                   double Schedule::Point::* field) {
    if (tau <= pts.front().tau) return pts.front().*field;
    if (tau >= pts.back().tau) return pts.back().*field;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (tau <= pts[i].tau) {
            const auto& lo = pts[i - 1];
            const auto& hi = pts[i];
            const double t = (tau - lo.tau) / (hi.tau - lo.tau);
            return lo.*field + t * (hi.*field - lo.*field);
        }
    }
    return pts.back().*field;
}

}  // namespace

void Schedule::validate() const {
    if (breakpoints.size() < 2) fail("BadSchedule", "need at least two breakpoints");
    if (breakpoints.front().tau != 0.0 || breakpoints.back().tau != 1.0)
        fail("BadSchedule", "tau must start at 0 and end at 1");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i].tau > breakpoints[i - 1].tau))
            fail("BadSchedule", "tau must be strictly increasing");
    if (breakpoints.front().rabi != 0.0 || breakpoints.back().rabi != 0.0)
        fail("BadSchedule", "the Rabi amplitude must vanish at both ends");
}

double Schedule::rabi(double tau) const {
    return interpolate(breakpoints, tau, &Point::rabi);
}

double Schedule::detuning(double tau) const {
    return interpolate(breakpoints, tau, &Point::detuning);
}

double Schedule::final_descent_start() const {
    // walk back from the end while the Rabi amplitude is non-increasing forward
    std::size_t i = breakpoints.size() - 1;
    while (i > 0 && breakpoints[i - 1].rabi >= breakpoints[i].rabi) --i;
    return breakpoints[i].tau;
}

Schedule default_schedule(double detuning0, double detuning1, double rabi_max) {
    if (!(rabi_max > 0.0)) fail("BadSchedule", "rabi_max must be positive");
    Schedule s;
    s.breakpoints = {{0.0, 0.0, detuning0},
                     {1.0 / 3.0, rabi_max, detuning0},
                     {2.0 / 3.0, rabi_max, detuning1},
                     {1.0, 0.0, detuning1}};
    return s;
}

std::vector<double> ring_profile(const Cluster& cluster, const std::vector<double>& weights) {
    if (weights.empty()) fail("BadProfile", "need at least one ring weight");
    if (cluster.periods.size() == 2)
        fail("RequiresOpenBoundary", "ring profile needs an open boundary");
    const auto bonds = enumerate_bonds(cluster, 1.0);  // nearest neighbors only
    const int L = cluster.size();
    std::vector<std::vector<int>> adj(L);
    for (const Bond& b : bonds) {
        adj[b.i].push_back(b.j);
        adj[b.j].push_back(b.i);
    }
    // multi-source BFS from the boundary (sites with fewer than 3 neighbors)
    std::vector<int> dist(L, -1);
    std::vector<int> queue;
    for (int i = 0; i < L; ++i) {
        if (adj[i].size() < 3) {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    if (queue.empty()) fail("RequiresOpenBoundary", "no boundary sites found");
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const int u = queue[h];
        for (int v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    std::vector<double> profile(L);
    for (int i = 0; i < L; ++i) {
        const int ring = std::min<int>(dist[i], static_cast<int>(weights.size()) - 1);
        profile[i] = weights[ring];
    }
    return profile;
}

GapTrace gap_scan(const SweepModel& model, const Cluster& cluster,
                  const Schedule& schedule, const std::vector<double>& profile,
                  int n_tau, int k, const EigenOptions& opts) {
    schedule.validate();
    if (n_tau < 2) fail("BadRequest", "need at least two tau points");
    if (static_cast<int>(profile.size()) != cluster.size())
        fail("BadProfile", "profile length must match the site count");
    const bool effective = model.kind == SweepModel::Kind::effective;
    const auto locals = effective ? SectorBasis::LocalStates::b_only
                                  : SectorBasis::LocalStates::two_species;
    const auto basis =
        SectorBasis::grand_canonical(cluster.size(), locals, opts.memory_budget);

    const double cutoff = effective ? 2.0 : model.couplings.cutoff_l;
    const auto bonds = enumerate_bonds(cluster, cutoff);
    TermList static_terms;
    if (effective) {
        static_terms = effective_terms(cluster, bonds, model.effective);
    } else {
        static_terms = hopping_terms(bonds, model.couplings, cluster);
        static_terms.append(interaction_terms(bonds, model.couplings));
    }

    EigenOptions o = opts;
    o.k = std::max(k, 2);
    o.want_vectors = 1;
    GapTrace trace;
    std::vector<cplx> guess;
    for (int p = 0; p < n_tau; ++p) {
        const double tau = double(p) / (n_tau - 1);
        DriveParams drive;
        drive.rabi_profile = profile;
        drive.rabi = schedule.rabi(tau);
        drive.detuning = schedule.detuning(tau);
        TermList terms = static_terms;
        TermList dterms = drive_terms(drive, cluster);
        if (effective) {
            // single species: keep the b-particle pieces only
            TermList filtered;
            for (const Term& t : dterms.terms)
                if (!(t.kind == Term::Kind::density && t.si == Species::A))
                    filtered.add(t);
            dterms = filtered;
        }
        terms.append(dterms);
        const auto op = make_operator(terms, basis, o.memory_budget);
        o.initial_guess = guess.empty() ? nullptr : &guess;
        auto res = lowest_eigenpairs(*op, o);
        guess = std::move(res.vectors[0]);
        const auto n = density_expectations(guess, basis);
        double mean_n = 0.0;
        for (double x : n) mean_n += x;
        mean_n /= cluster.size();
        GapTraceRow row{tau, drive.rabi, drive.detuning, {}, mean_n};
        for (int m = 1; m <= 4; ++m)
            row.gaps[m - 1] =
                m < static_cast<int>(res.values.size()) ? res.values[m] - res.values[0] : 0.0;
        trace.push_back(row);
    }
    return trace;
}

CriticalPoint critical_point(const GapTrace& trace, const Schedule& schedule) {
    if (trace.empty()) fail("BadRequest", "empty gap trace");
    const double start = schedule.final_descent_start();
    CriticalPoint best{trace.back().tau, trace.back().rabi,
                       std::numeric_limits<double>::infinity()};
    for (const auto& row : trace) {
        if (row.tau + 1e-12 < start) continue;
        if (row.gaps[0] < best.min_gap) best = {row.tau, row.rabi, row.gaps[0]};
    }
    return best;
}

}  // namespace fci
