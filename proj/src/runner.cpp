#include "fci/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "fci/analysis.hpp"
#include "fci/bands.hpp"
#include "fci/chern.hpp"
#include "fci/config.hpp"
#include "fci/detect.hpp"
#include "fci/lanczos.hpp"
#include "fci/observables.hpp"
#include "fci/parallel.hpp"
#include "fci/sweep.hpp"

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("cli", code, msg);
}

struct Context {
    ConfigFile cfg;
    CouplingSet couplings;
    EffectiveParams effective;
    std::string out;
    EigenOptions solver;
};

Cluster load_cluster(const RunConfig& rc) {
    if (!rc.cluster_file.empty()) return import_cluster_file(rc.cluster_file);
    if (rc.preset.empty()) fail("ConfigParse", "no geometry: pass --preset or --cluster FILE");
    return preset_cluster(rc.preset);
}

int particle_count(const Cluster& cl, const std::string& filling) {
    const double f = parse_filling(filling);
    const double n = f * cl.size();
    const int N = static_cast<int>(std::lround(n));
    if (std::abs(n - N) > 1e-9)
        fail("ConfigParse", "filling " + filling + " is not an integer particle count on " +
                                std::to_string(cl.size()) + " sites");
    return N;
}

std::string path_in(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int cmd_bands(const RunConfig& rc, const Context& ctx) {
    const auto path = standard_path(rc.path_points);
    const auto table = band_structure(path, ctx.couplings);
    CsvWriter out(path_in(ctx.out, "bands.csv"));
    out.header({"kx", "ky", "E1", "E2", "E3", "E4"});
    for (std::size_t i = 0; i < path.size(); ++i)
        out.row({path[i].x, path[i].y, table[i][0], table[i][1], table[i][2], table[i][3]});
    const auto q = band_quality(ctx.couplings, rc.band_grid);
    CsvWriter sum(path_in(ctx.out, "bands_summary.csv"));
    sum.header({"chern_1", "chern_2", "chern_3", "chern_4", "flatness", "sigma_b"});
    sum.row({double(q.chern[0]), double(q.chern[1]), double(q.chern[2]), double(q.chern[3]),
             q.flatness, q.sigma_b});
    std::cout << "C = " << q.chern[0] << "  f = " << format_double(q.flatness)
              << "  sigma_B = " << format_double(q.sigma_b) << "\n";
    return 0;
}

TermList model_terms(const Context& ctx, const RunConfig& rc, const Cluster& cl,
                     Twist twist) {
    const auto bonds = enumerate_bonds(cl, rc.model == "effective" ? 2.0
                                                                   : ctx.couplings.cutoff_l);
    if (rc.model == "effective") return effective_terms(cl, bonds, ctx.effective, twist);
    TermList t = hopping_terms(bonds, ctx.couplings, cl, twist);
    t.append(interaction_terms(bonds, ctx.couplings));
    return t;
}

SectorBasis sector_for(const RunConfig& rc, const Cluster& cl, int n,
                       std::uint64_t budget) {
    const auto locals = rc.model == "effective" ? SectorBasis::LocalStates::b_only
                                                : SectorBasis::LocalStates::two_species;
    return SectorBasis::fixed_n(cl.size(), n, locals, budget);
}

int cmd_ed(const RunConfig& rc, const Context& ctx) {
    const Cluster cl = load_cluster(rc);
    const int n = particle_count(cl, rc.filling);
    const auto basis = sector_for(rc, cl, n, rc.memory_budget);
    const auto op = make_operator(model_terms(ctx, rc, cl, {}), basis, rc.memory_budget);
    auto opts = ctx.solver;
    opts.want_vectors = 0;
    const auto res = lowest_eigenpairs(*op, opts);
    CsvWriter out(path_in(ctx.out, "ed.csv"));
    out.header({"level", "E_over_h_MHz", "residual"});
    for (std::size_t i = 0; i < res.values.size(); ++i)
        out.row({double(i), res.values[i], res.residuals[i]});
    std::cout << "dim = " << basis.dimension() << "  E0 = " << format_double(res.values[0])
              << "  E1-E0 = " << format_double(res.values[1] - res.values[0])
              << "  E2-E0 = " << format_double(res.values[2] - res.values[0]) << "\n";
    return 0;
}

int cmd_flow(const RunConfig& rc, const Context& ctx) {
    const Cluster cl = load_cluster(rc);
    const int n = particle_count(cl, rc.filling);
    const auto basis = sector_for(rc, cl, n, rc.memory_budget);
    const auto factory = [&](Twist tw) { return model_terms(ctx, rc, cl, tw); };
    const auto flow = spectral_flow(factory, basis, rc.k, rc.flow_points, rc.flow_axis,
                                    ctx.solver);
    CsvWriter out(path_in(ctx.out, "flow.csv"));
    std::vector<std::string> head{"theta"};
    for (int i = 0; i < rc.k; ++i) head.push_back("E" + std::to_string(i));
    out.header(head);
    for (std::size_t p = 0; p < flow.thetas.size(); ++p) {
        std::vector<double> row{flow.thetas[p]};
        row.insert(row.end(), flow.energies[p].begin(), flow.energies[p].end());
        out.row(row);
    }
    std::cout << "flow points = " << flow.thetas.size() << "\n";
    return 0;
}

int cmd_chern(const RunConfig& rc, const Context& ctx) {
    const Cluster cl = load_cluster(rc);
    const int n = particle_count(cl, rc.filling);
    const auto basis = sector_for(rc, cl, n, rc.memory_budget);
    const auto factory = [&](Twist tw) { return model_terms(ctx, rc, cl, tw); };
    const auto result =
        many_body_chern(factory, basis, rc.manifold_dim, rc.twist_grid, ctx.solver);
    CsvWriter sum(path_in(ctx.out, "chern_summary.csv"));
    sum.header({"chern", "manifold_dim", "grid_n", "min_manifold_gap"});
    sum.row({double(result.chern), double(rc.manifold_dim), double(rc.twist_grid),
             result.berry.min_manifold_gap});
    CsvWriter grid(path_in(ctx.out, "berry_grid.csv"));
    grid.header({"theta1", "theta2", "B_normalized"});
    const int gn = result.berry.grid_n;
    const double mean = 2.0 * M_PI * result.chern / (gn * gn);
    for (int i = 0; i < gn; ++i)
        for (int j = 0; j < gn; ++j)
            grid.row({2.0 * M_PI * i / gn, 2.0 * M_PI * j / gn,
                      result.chern != 0 ? result.berry.curvature(i, j) / mean
                                        : result.berry.curvature(i, j)});
    std::cout << "many-body C = " << result.chern
              << "  min manifold gap = " << format_double(result.berry.min_manifold_gap)
              << "\n";
    return 0;
}

int cmd_correlations(const RunConfig& rc, const Context& ctx) {
    const Cluster cl = load_cluster(rc);
    const int n = particle_count(cl, rc.filling);
    const auto basis = sector_for(rc, cl, n, rc.memory_budget);
    const auto op = make_operator(model_terms(ctx, rc, cl, {}), basis, rc.memory_budget);
    auto opts = ctx.solver;
    opts.k = std::max(2, std::min(opts.k, 4));
    opts.want_vectors = 1;
    const auto res = lowest_eigenpairs(*op, opts);
    const auto corr = density_correlations(res.vectors[0], basis);
    CsvWriter out(path_in(ctx.out, "correlations.csv"));
    out.header({"i", "j", "nn_ij", "distance_l"});
    for (int i = 0; i < cl.size(); ++i)
        for (int j = 0; j < cl.size(); ++j)
            out.row({double(i), double(j), corr.nn(i, j),
                     min_image(cl, i, j).first.norm() / cl.spacing_um});
    CsvWriter dens(path_in(ctx.out, "density.csv"));
    dens.header({"site", "n"});
    for (int i = 0; i < cl.size(); ++i) dens.row({double(i), corr.n(i)});
    std::cout << "mean density = " << format_double(corr.n.mean()) << "\n";
    return 0;
}

int cmd_entropy(const RunConfig& rc, const Context& ctx) {
    const Cluster cl = load_cluster(rc);
    const int n = particle_count(cl, rc.filling);
    const auto basis = sector_for(rc, cl, n, rc.memory_budget);
    const auto op = make_operator(model_terms(ctx, rc, cl, {}), basis, rc.memory_budget);
    auto opts = ctx.solver;
    opts.k = std::max(2, std::min(opts.k, 4));
    opts.want_vectors = 1;
    const auto res = lowest_eigenpairs(*op, opts);
    std::vector<int> subsystem = rc.subsystem;
    if (subsystem.empty())
        for (int i = 0; i < cl.size() / 2; ++i) subsystem.push_back(i);
    const double s = entanglement_entropy(res.vectors[0], basis, subsystem);
    CsvWriter out(path_in(ctx.out, "entropy.csv"));
    out.header({"subsystem_sites", "entropy_nats"});
    out.row({double(subsystem.size()), s});
    std::cout << "S = " << format_double(s) << " nats\n";
    return 0;
}

int cmd_sweep(const RunConfig& rc, const Context& ctx) {
    const Cluster cl = load_cluster(rc);
    SweepModel model;
    model.kind = rc.model == "full" ? SweepModel::Kind::full : SweepModel::Kind::effective;
    model.couplings = ctx.couplings;
    model.effective = ctx.effective;
    const auto schedule = default_schedule(rc.detuning0, rc.detuning1, rc.rabi_max);
    std::vector<double> profile;
    if (rc.profile_weights.size() == 1 && rc.profile_weights[0] == 1.0)
        profile.assign(cl.size(), 1.0);
    else
        profile = ring_profile(cl, rc.profile_weights);
    const auto trace =
        gap_scan(model, cl, schedule, profile, rc.n_tau, std::min(rc.k, 5), ctx.solver);
    CsvWriter out(path_in(ctx.out, "sweep.csv"));
    out.header({"tau", "omega", "delta", "gap1", "gap2", "gap3", "gap4", "density"});
    for (const auto& r : trace)
        out.row({r.tau, r.rabi, r.detuning, r.gaps[0], r.gaps[1], r.gaps[2], r.gaps[3],
                 r.density});
    const auto crit = critical_point(trace, schedule);
    CsvWriter cw(path_in(ctx.out, "critical.csv"));
    cw.header({"tau_c", "omega_c", "min_gap"});
    cw.row({crit.tau_c, crit.rabi_c, crit.min_gap});
    std::cout << "min gap = " << format_double(crit.min_gap) << " at omega = "
              << format_double(crit.rabi_c) << "  n(1) = "
              << format_double(trace.back().density) << "\n";
    return 0;
}

int cmd_detect(const RunConfig& rc, const Context& ctx) {
    const Cluster cl = load_cluster(rc);
    auto probe = make_edge_probe(cl, rc.edge_columns, rc.mu_max, rc.mu_step);
    CouplingSet c = ctx.couplings;
    if (rc.regime == "trivial") c = trivial_mode(c);
    else if (rc.regime != "topological")
        fail("ConfigParse", "regime must be topological or trivial");
    const auto res = charge_scan(probe, c, parse_filling(rc.filling), ctx.solver);
    CsvWriter out(path_in(ctx.out, "detect.csv"));
    out.header({"mu", "NL", "NR", "E0"});
    for (std::size_t i = 0; i < res.mu.size(); ++i)
        out.row({res.mu[i], res.n_left[i], res.n_right[i], res.energy[i]});
    CsvWriter dens(path_in(ctx.out, "detect_density.csv"));
    dens.header({"mu", "site", "n"});
    for (std::size_t i = 0; i < res.mu.size(); ++i)
        for (int s = 0; s < cl.size(); ++s)
            dens.row({res.mu[i], double(s), res.site_density(static_cast<Eigen::Index>(i), s)});
    std::cout << "NL range = [" << format_double(res.n_left.front()) << ", "
              << format_double(res.n_left.back()) << "]  max jump = "
              << format_double(max_adjacent_jump(res.n_left)) << "\n";
    return 0;
}

int cmd_fit(const RunConfig& rc, const Context& ctx) {
    if (rc.input_path.empty()) fail("ConfigParse", "fit needs --in FILE");
    CsvWriter out(path_in(ctx.out, "fit.csv"));
    if (rc.fit_model == "arealaw") {
        const auto fit = fit_area_law(read_xy_csv(rc.input_path));
        out.header({"a", "gamma", "sigma_a", "sigma_gamma", "residual_norm", "points"});
        out.row({fit.params(0), fit.params(1), fit.sigma(0), fit.sigma(1),
                 fit.residual_norm, double(fit.points_used)});
        std::cout << "gamma = " << format_double(fit.params(1)) << "\n";
    } else if (rc.fit_model == "chiextrap") {
        const auto fit = extrapolate_entropy(read_xy_csv(rc.input_path), rc.chi_min);
        out.header({"S_inf", "b", "c", "sigma_S_inf", "sigma_b", "sigma_c",
                    "residual_norm", "points"});
        out.row({fit.params(0), fit.params(1), fit.params(2), fit.sigma(0), fit.sigma(1),
                 fit.sigma(2), fit.residual_norm, double(fit.points_used)});
        std::cout << "S_inf = " << format_double(fit.params(0)) << "\n";
    } else if (rc.fit_model == "plateau") {
        const auto pb =
            plateau_bounds(read_xy_csv(rc.input_path), rc.target_density, rc.plateau_tol);
        out.header({"mu_lo", "mu_hi", "width"});
        out.row({pb.mu_lo, pb.mu_hi, pb.width});
        std::cout << "plateau width = " << format_double(pb.width) << " MHz\n";
    } else if (rc.fit_model == "twostage") {
        std::vector<EntropySample> samples;
        for (const auto& r : read_xyz_csv(rc.input_path)) samples.push_back({r[0], r[1], r[2]});
        const auto te = two_stage_gamma(samples, rc.chi_min);
        out.header({"gamma", "gamma_chi_max", "slope", "gamma_over_ln2"});
        out.row({te.gamma, te.gamma_chi_max, te.slope, te.gamma / std::log(2.0)});
        std::cout << "gamma / ln2 = " << format_double(te.gamma / std::log(2.0)) << "\n";
    } else {
        fail("ConfigParse", "unknown fit model " + rc.fit_model);
    }
    return 0;
}

}  // namespace

double parse_filling(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return std::stod(text);
        const double p = std::stod(text.substr(0, slash));
        const double q = std::stod(text.substr(slash + 1));
        if (q == 0.0) fail("ConfigParse", "zero denominator in filling");
        return p / q;
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail("ConfigParse", "cannot parse filling '" + text + "'");
    }
}

int run(const RunConfig& rc) {
    Context ctx;
    if (!rc.config_path.empty()) ctx.cfg = ConfigFile::parse_file(rc.config_path);
    ctx.couplings = couplings_from_config(ctx.cfg);
    ctx.effective = effective_from_config(ctx.cfg);
    ctx.out = rc.out_dir;
    std::filesystem::create_directories(ctx.out);

    int threads = rc.threads;
    if (threads <= 0) {
        if (const char* env = std::getenv("FCI_THREADS")) threads = std::atoi(env);
        if (threads <= 0) threads = 1;
    }
    set_thread_count(threads);

    ctx.solver.k = rc.k;
    ctx.solver.tol = rc.tol;
    ctx.solver.seed = rc.seed;
    ctx.solver.memory_budget = rc.memory_budget;

    int status = 0;
    if (rc.command == "bands") status = cmd_bands(rc, ctx);
    else if (rc.command == "ed") status = cmd_ed(rc, ctx);
    else if (rc.command == "flow") status = cmd_flow(rc, ctx);
    else if (rc.command == "chern") status = cmd_chern(rc, ctx);
    else if (rc.command == "correlations") status = cmd_correlations(rc, ctx);
    else if (rc.command == "entropy") status = cmd_entropy(rc, ctx);
    else if (rc.command == "sweep") status = cmd_sweep(rc, ctx);
    else if (rc.command == "detect") status = cmd_detect(rc, ctx);
    else if (rc.command == "fit") status = cmd_fit(rc, ctx);
    else fail("ConfigParse", "unknown command '" + rc.command + "'");

    const auto unread = ctx.cfg.unread_keys();
    if (!unread.empty())
        fail("ConfigParse", "unknown config key " + unread.front());
    return status;
}

}  // namespace fci
