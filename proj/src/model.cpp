#include "fci/model.hpp"

#include <cmath>
#include <numbers>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("model", code, msg);
}

cplx twist_phase(Twist t, std::array<int, 2> winding) {
    const double arg = t.theta1 * winding[0] + t.theta2 * winding[1];
    return std::polar(1.0, arg);
}

}  // namespace

void CouplingSet::validate() const {
    auto check = [](double x, const char* what) {
        if (!std::isfinite(x)) fail("BadCoupling", std::string(what) + " not finite");
    };
    check(splitting, "splitting");
    for (int c = 0; c < 3; ++c) {
        check(hop_a[c], "hop_a");
        check(hop_b[c], "hop_b");
        check(flip_abs[c], "flip");
        if (flip_abs[c] < 0.0) fail("BadCoupling", "flip magnitude must be >= 0");
        for (int al = 0; al < 3; ++al) {
            for (int be = 0; be < 3; ++be) {
                check(v[al][be][c], "density coupling");
                if (v[al][be][c] != v[be][al][c])
                    fail("BadCoupling", "density couplings must be symmetric");
            }
        }
    }
    if (!(cutoff_l > 0.0)) fail("BadCoupling", "cutoff must be positive");
}

CouplingSet default_couplings() {
    CouplingSet c;
    c.splitting = 18.52;
    c.hop_a = {1.26, 0.24, 0.16};
    c.hop_b = {0.49, 0.09, 0.06};
    c.flip_abs = {2.38, 0.45, 0.29};
    c.cutoff_l = 2.0;
    using F = Flavor;
    auto set = [&](F a, F b, double v1, double v2, double v3) {
        c.set_density_coupling(a, b, DistanceClass::nn, v1);
        c.set_density_coupling(a, b, DistanceClass::nnn, v2);
        c.set_density_coupling(a, b, DistanceClass::nnnn, v3);
    };
    set(F::vac, F::vac, 0.03, 0.00, 0.00);
    set(F::vac, F::plus, 0.07, 0.01, 0.01);
    set(F::vac, F::minus, -0.20, 0.00, 0.00);
    set(F::plus, F::plus, 0.19, 0.04, 0.03);
    set(F::plus, F::minus, 0.25, 0.05, 0.03);
    set(F::minus, F::minus, 0.28, 0.05, 0.04);
    return c;
}

bool TermList::conserves_particles() const {
    for (const Term& t : terms)
        if (t.kind == Term::Kind::drive) return false;
    return true;
}

TermList hopping_terms(const std::vector<Bond>& bonds, const CouplingSet& c,
                       const Cluster& cluster, Twist twist) {
    c.validate();
    TermList out;
    for (const Bond& b : bonds) {
        const int cls = static_cast<int>(b.cls);
        const cplx tw = twist_phase(twist, b.winding);
        const cplx w = c.flip_abs[cls] * std::polar(1.0, -2.0 * b.phi);
        out.add({Term::Kind::hop_a, b.i, b.j, -1, {}, {}, -c.hop_a[cls] * tw});
        out.add({Term::Kind::hop_b, b.i, b.j, -1, {}, {}, -c.hop_b[cls] * tw});
        // Both flip orientations are independent operators; phi_ji = phi_ij + pi
        // leaves the e^{-2 i phi} factor unchanged while the twist conjugates.
        out.add({Term::Kind::flip, b.i, b.j, -1, {}, {}, w * tw});
        out.add({Term::Kind::flip, b.j, b.i, -1, {}, {}, w * std::conj(tw)});
    }
    for (int i = 0; i < cluster.size(); ++i)
        out.add({Term::Kind::onsite_a, i, -1, -1, {}, {}, c.splitting});
    return out;
}

TermList interaction_terms(const std::vector<Bond>& bonds, const CouplingSet& c) {
    c.validate();
    TermList out;
    // In Eq.-(2) form the unordered pair (i,j) carries sum_{alpha,beta}
    // V^{ab}(d) n^a_i n^b_j.  Substituting n^0 = 1 - n^a - n^b gives, per
    // bond: a constant V^00, single densities (V^{0s} - V^00), and pair
    // densities (V^{ss'} - V^{0s} - V^{0s'} + V^00) over species {a,b} only.
    double constant = 0.0;
    const auto F = [](Species s) {
        return s == Species::A ? Flavor::plus : Flavor::minus;
    };
    bool any = false;
    for (const Bond& b : bonds) {
        const DistanceClass d = b.cls;
        const double v00 = c.density_coupling(Flavor::vac, Flavor::vac, d);
        constant += v00;
        for (Species s : {Species::A, Species::B}) {
            const double coef = c.density_coupling(Flavor::vac, F(s), d) - v00;
            if (coef != 0.0) {
                out.add({Term::Kind::density, b.i, -1, -1, s, {}, coef});
                out.add({Term::Kind::density, b.j, -1, -1, s, {}, coef});
                any = true;
            }
        }
        for (Species si : {Species::A, Species::B}) {
            for (Species sj : {Species::A, Species::B}) {
                const double coef = c.density_coupling(F(si), F(sj), d) -
                                    c.density_coupling(Flavor::vac, F(si), d) -
                                    c.density_coupling(Flavor::vac, F(sj), d) + v00;
                if (coef != 0.0) {
                    out.add({Term::Kind::density_density, b.i, b.j, -1, si, sj, coef});
                    any = true;
                }
            }
        }
    }
    if (constant != 0.0) {
        out.add({Term::Kind::constant, -1, -1, -1, {}, {}, constant});
        any = true;
    }
    (void)any;
    return out;
}

TermList drive_terms(const DriveParams& drive, const Cluster& cluster) {
    if (static_cast<int>(drive.rabi_profile.size()) != cluster.size())
        fail("ProfileLengthMismatch",
             "profile has " + std::to_string(drive.rabi_profile.size()) +
                 " entries for " + std::to_string(cluster.size()) + " sites");
    TermList out;
    for (int i = 0; i < cluster.size(); ++i) {
        const double amp = drive.rabi * drive.rabi_profile[i];
        if (amp != 0.0) out.add({Term::Kind::drive, i, -1, -1, {}, {}, amp});
        out.add({Term::Kind::density, i, -1, -1, Species::A, {}, -drive.detuning});
        out.add({Term::Kind::density, i, -1, -1, Species::B, {}, -drive.detuning});
    }
    return out;
}

namespace {

// Unique common nearest neighbor m of an NNN pair, identified through
// minimum-image segments that compose to the bond displacement.
int find_mid_site(const Cluster& cluster, const std::vector<Bond>& bonds, int i, int j,
                  Vec2 dij) {
    const double l = cluster.spacing_um;
    int found = -1;
    for (int m = 0; m < cluster.size(); ++m) {
        if (m == i || m == j) continue;
        const auto [dim_, w1] = min_image(cluster, i, m);
        const auto [dmj, w2] = min_image(cluster, m, j);
        if (std::abs(dim_.norm() - l) > 1e-6 * l) continue;
        if (std::abs(dmj.norm() - l) > 1e-6 * l) continue;
        if ((dim_ + dmj - dij).norm() > 1e-6 * l) continue;
        if (found >= 0) return -1;  // ambiguous
        found = m;
    }
    (void)bonds;
    return found;
}

}  // namespace

TermList effective_terms(const Cluster& cluster, const std::vector<Bond>& bonds,
                         const EffectiveParams& eff, Twist twist) {
    if (!(eff.hop_b > 0.0)) fail("BadCoupling", "effective hop_b must be positive");
    TermList out;
    const double tb = eff.hop_b;
    constexpr double kThird32 = 0.19245008972987525;  // 3^{-3/2}
    for (const Bond& b : bonds) {
        const cplx tw = twist_phase(twist, b.winding);
        switch (b.cls) {
            case DistanceClass::nn:
                out.add({Term::Kind::hop_b, b.i, b.j, -1, {}, {}, -tb * tw});
                if (eff.lambda != 0.0)
                    out.add({Term::Kind::density_density, b.i, b.j, -1, Species::B,
                             Species::B, eff.lambda * tb});
                break;
            case DistanceClass::nnnn:
                if (eff.zeta != 0.0)
                    out.add({Term::Kind::hop_b, b.i, b.j, -1, {}, {}, -eff.zeta * tb * tw});
                break;
            case DistanceClass::nnn: {
                const auto [dij, w] = min_image(cluster, b.i, b.j);
                const int mid = find_mid_site(cluster, bonds, b.i, b.j, dij);
                if (mid < 0)
                    fail("MissingMidSite",
                         "no unique intermediate site for NNN pair (" +
                             std::to_string(b.i) + "," + std::to_string(b.j) + ")");
                // Stored orientation b+_i b_j moves the particle j -> i; the
                // hop is clockwise (p = +1) when the path j -> mid -> i has
                // negative signed area around the hexagon center.
                const auto [djm, w1] = min_image(cluster, b.j, mid);
                const auto [dmi, w2] = min_image(cluster, mid, b.i);
                const double cross = djm.cross(dmi);
                const int p = cross < 0.0 ? +1 : -1;
                const cplx flux = std::polar(1.0, 2.0 * std::numbers::pi * p / 3.0);
                out.add({Term::Kind::hop_b, b.i, b.j, -1, {}, {},
                         -tb * (kThird32 + eff.lambda * flux) * tw});
                if (eff.lambda != 0.0)
                    out.add({Term::Kind::three_site, b.i, b.j, mid, {}, {},
                             tb * eff.lambda * flux * tw});
                break;
            }
        }
    }
    return out;
}

}  // namespace fci
