// hvlab: vortex configurations, periodic domain builder, classical minimal
// surface domains, correspondence checks, and artifact exporters.
//
// Exit codes: 0 success, 1 check failure, 2 input error, 3 solver failure,
// 4 geometry failure.

#include "hvlab/builder.hpp"
#include "hvlab/configurations.hpp"
#include "hvlab/correspondence.hpp"
#include "hvlab/io.hpp"
#include "hvlab/weierstrass.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace {

using namespace hvlab;
using num::cplx;
using io::json;

constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitGeometryFailure = 4;

struct CheckTable {
    json results = json::array();
    bool all_pass = true;

    void add(const std::string& name, bool pass, double value,
             const std::string& note = {}) {
        std::printf("%s  %-44s %.6g%s%s\n", pass ? "PASS" : "FAIL", name.c_str(),
                    value, note.empty() ? "" : "  ", note.c_str());
        results.push_back(
            {{"name", name}, {"pass", pass}, {"value", value}, {"note", note}});
        all_pass = all_pass && pass;
    }
};

void ensure_out_dir(const std::string& out) {
    std::filesystem::create_directories(out);
}

void emit_artifact(const io::DomainArtifact& art, const std::string& out, int tiles) {
    ensure_out_dir(out);
    const auto dir = std::filesystem::path(out);
    io::write_csv_file(art, (dir / "domain.csv").string());
    io::write_svg_file(art, (dir / "domain.svg").string(), tiles);
    io::write_json_file(io::artifact_report(art), (dir / "report.json").string());
    std::printf("wrote %s/{domain.csv, domain.svg, report.json}\n", out.c_str());
}

json forces_json(const io::ConfigFile& cf) {
    json out{{"schema", 1}};
    json farr = json::array();
    if (cf.is_periodic()) {
        const auto& pc = std::get<cfg::PeriodicConfiguration>(cf.config);
        auto F = cfg::periodic_forces(pc);
        cplx sum = 0.0;
        double maxF = 0.0;
        for (cplx f : F) {
            farr.push_back({f.real(), f.imag()});
            sum += f;
            maxF = std::max(maxF, std::abs(f));
        }
        out["kind"] = "periodic";
        out["forces"] = farr;
        out["max_abs_force"] = maxF;
        out["sum_residual"] = std::abs(sum);
        if (maxF <= 1e-8) {
            auto [rank, ok] = cfg::non_degenerate(pc);
            out["jacobian_rank"] = rank;
            out["non_degenerate"] = ok;
        }
    } else {
        const auto& fc = std::get<cfg::FiniteConfiguration>(cf.config);
        auto F = cfg::finite_forces(fc);
        auto [id1, id2] = cfg::finite_identities(fc);
        double maxF = 0.0;
        for (cplx f : F) {
            farr.push_back({f.real(), f.imag()});
            maxF = std::max(maxF, std::abs(f));
        }
        out["kind"] = "finite";
        out["forces"] = farr;
        out["max_abs_force"] = maxF;
        out["sum_residual"] = std::abs(id1);
        out["moment_residual"] = std::abs(id2);
        if (maxF <= 1e-8) {
            auto [rank, ok] = cfg::non_degenerate(fc);
            out["jacobian_rank"] = rank;
            out["non_degenerate"] = ok;
        }
    }
    return out;
}

int cmd_forces(const std::string& path, const std::string& out) {
    const io::ConfigFile cf = io::load_config_file(path);
    const json rep = forces_json(cf);
    std::printf("%s configuration, n = %zu\n", rep["kind"].get<std::string>().c_str(),
                rep["forces"].size());
    for (std::size_t i = 0; i < rep["forces"].size(); ++i)
        std::printf("  F_%zu = (% .12e, % .12e)\n", i + 1,
                    rep["forces"][i][0].get<double>(), rep["forces"][i][1].get<double>());
    std::printf("  max |F_i|      = %.6e\n", rep["max_abs_force"].get<double>());
    std::printf("  |sum F_i|      = %.6e\n", rep["sum_residual"].get<double>());
    if (rep.contains("moment_residual"))
        std::printf("  moment residual = %.6e\n", rep["moment_residual"].get<double>());
    if (rep.contains("jacobian_rank"))
        std::printf("  jacobian rank  = %d (%s)\n", rep["jacobian_rank"].get<int>(),
                    rep["non_degenerate"].get<bool>() ? "non-degenerate" : "degenerate");
    if (!out.empty()) {
        ensure_out_dir(out);
        io::write_json_file(rep, (std::filesystem::path(out) / "forces.json").string());
    }
    return 0;
}

int cmd_solve(const std::string& path, double tol, const std::string& out) {
    io::ConfigFile cf = io::load_config_file(path);
    cfg::ForceReport rep;
    if (cf.is_periodic())
        cf.config = cfg::balance_solve(std::get<cfg::PeriodicConfiguration>(cf.config),
                                       &rep, tol);
    else
        cf.config =
            cfg::balance_solve(std::get<cfg::FiniteConfiguration>(cf.config), &rep, tol);
    const json balanced = io::config_to_json(cf);
    std::printf("%s\n", balanced.dump(2).c_str());
    std::fprintf(stderr, "balanced: max |F_i| = %.3e, rank %d (expected %d)\n",
                 rep.max_abs_force, rep.jacobian_rank, rep.expected_rank);
    if (!out.empty()) {
        ensure_out_dir(out);
        io::write_json_file(balanced,
                            (std::filesystem::path(out) / "balanced.json").string());
    }
    return 0;
}

int cmd_build(const std::string& path, double t_flag, int grid_flag, int tiles,
              const std::string& out) {
    const io::ConfigFile cf = io::load_config_file(path);
    if (!cf.is_periodic())
        throw io::SchemaError("build requires a periodic configuration");
    const auto& pc = std::get<cfg::PeriodicConfiguration>(cf.config);
    const double t = t_flag > 0 ? t_flag : cf.build.t;
    const int grid = grid_flag > 0 ? grid_flag : cf.build.grid;
    const bld::BuilderInput input(pc, t, cf.build.a);
    const bld::BuiltDomain built = bld::build_domain(input, grid);
    io::DomainArtifact art = bld::to_artifact(built);
    try {
        const bld::AbReport ab = bld::prop_ab_check(built);
        art.report["classification"] = std::string(1, ab.classification);
        art.report["class_residual"] = ab.class_residual;
        art.report["flux_residual"] = ab.flux_residual;
        art.report["velocity_limit_residual"] = ab.velocity_residual;
    } catch (const bld::Unclassifiable& e) {
        art.report["classification"] = "?";
        art.report["classification_error"] = e.what();
    }
    std::printf("built domain at t = %g (t_max = %g), %zu components\n", built.t,
                built.t_limit, built.z_curves.size());
    for (std::size_t i = 0; i < built.circulations.size(); ++i)
        std::printf("  C_%zu = %.12g, |defect| = %.3e\n", i + 1, built.circulations[i],
                    std::abs(built.defects[i]));
    emit_artifact(art, out, tiles);
    return 0;
}

int cmd_classical(const std::string& name, double a_flag, int grid, int tiles,
                  const std::string& out) {
    std::optional<double> a;
    if (a_flag > 0) a = a_flag;
    const wst::WeierstrassData data = wst::classical_data(name, a);
    const io::DomainArtifact art = wst::domain_image(data, grid);
    std::printf("%s: %zu boundary components, %zu periods, %zu streamlines\n",
                name.c_str(), art.boundaries.size(), art.periods.size(),
                art.streamlines.size());
    for (cplx p : art.periods)
        std::printf("  period (% .6f, % .6f)\n", p.real(), p.imag());
    emit_artifact(art, out, tiles);
    return 0;
}

int cmd_correspond(const std::string& path, double t_flag, int grid, double tol,
                   unsigned seed, const std::string& out) {
    const io::ConfigFile cf = io::load_config_file(path);
    if (!cf.is_periodic())
        throw io::SchemaError("correspond requires a periodic configuration");
    const auto& pc = std::get<cfg::PeriodicConfiguration>(cf.config);
    const double t = t_flag > 0 ? t_flag : cf.build.t;
    const bld::BuilderInput input(pc, t, cf.build.a);
    const bld::BuiltDomain built = bld::build_domain(input, 64);
    const cor::StreamData sd = bld::stream_view(built, input);

    cor::ProbeOptions opt;
    opt.grid = grid;
    opt.tol = tol;
    opt.seed = seed;

    CheckTable table;

    // Forward direction and boundary translation constancy. The traced
    // boundary carries a residual O(t^2) variation of u, and along the
    // boundary d(psi) - dz = -conj(2 u_z) du, so the attainable constancy is
    // bounded by that variation; the tolerance reflects it.
    const cor::VortexToMinimal vm = cor::vortex_to_minimal(sd, opt);
    double trans_dev = 0.0, u_range = 0.0;
    for (std::size_t i = 0; i < sd.domain.boundary.size(); ++i) {
        const auto& poly = sd.domain.boundary[i];
        const std::size_t stride = std::max<std::size_t>(1, poly.size() / 16);
        double umin = 1e300, umax = -1e300, u = 0.0;
        for (std::size_t k = 0; k < poly.size(); k += stride) {
            const cplx tau = vm.psi(poly[k]) - poly[k];
            trans_dev = std::max(trans_dev,
                                 std::abs(tau - vm.boundary_translations[i]));
            const cplx b = poly[std::min(k + stride, poly.size() - 1)];
            u += num::integrate_contour(
                     [&sd](cplx w) { return 2.0 * sd.uz(w); },
                     num::ContourPath::segment(poly[k], b), {})
                     .real();
            umin = std::min(umin, u);
            umax = std::max(umax, u);
        }
        u_range = std::max(u_range, umax - umin);
    }
    const double trans_tol = std::max(1e-6, 2.0 * u_range);
    char tol_note[64];
    std::snprintf(tol_note, sizeof tol_note, "<= %.2g (boundary u-variation limit)",
                  trans_tol);
    table.add("boundary translation constancy", trans_dev <= trans_tol, trans_dev,
              tol_note);

    // Contraction / expansion inequalities on random interior pairs.
    std::mt19937 rng(seed);
    auto sample = [&rng](const cor::Domain& d) {
        std::uniform_real_distribution<double> ux(d.x0, d.x0 + d.width);
        std::uniform_real_distribution<double> uy(d.ymin, d.ymax);
        const double clear = 0.01 * std::min(d.width, d.ymax - d.ymin);
        for (;;) {
            const cplx z(ux(rng), uy(rng));
            if (d.inside(z) && d.boundary_clearance(z) > clear) return z;
        }
    };
    int contraction_bad = 0;
    for (int k = 0; k < opt.probes; ++k) {
        const cplx z1 = sample(sd.domain), z2 = sample(sd.domain);
        const double dz = std::abs(z2 - z1);
        if (dz < 1e-12) continue;
        const double dw = std::abs(vm.psi(z2) - vm.psi(z1));
        if (!(dw > 0.0 && dw < dz)) ++contraction_bad;
    }
    table.add("contraction 0 < |psi(z')-psi(z)| < |z'-z|", contraction_bad == 0,
              double(contraction_bad), "violations");

    const cor::MinimalToVortex mv = cor::minimal_to_vortex(vm.graph, opt);
    int expansion_bad = 0;
    for (int k = 0; k < opt.probes; ++k) {
        const cplx w1 = sample(vm.graph.domain), w2 = sample(vm.graph.domain);
        const double dw = std::abs(w2 - w1);
        if (dw < 1e-12) continue;
        const double dz = std::abs(mv.F(w2) - mv.F(w1));
        if (!(dz > dw)) ++expansion_bad;
    }
    table.add("expansion |F(w')-F(w)| > |w'-w|", expansion_bad == 0,
              double(expansion_bad), "violations");

    // Round trip F(psi(z)) = z + constant, reusing the two cached maps.
    cor::RoundTrip rt;
    {
        std::vector<cplx> dev;
        cplx mean = 0.0;
        for (int k = 0; k < opt.probes; ++k) {
            const cplx z = sample(sd.domain);
            dev.push_back(mv.F(vm.psi(z)) - z);
            mean += dev.back();
        }
        mean /= double(dev.size());
        rt.translation = mean;
        for (cplx d : dev)
            rt.max_deviation = std::max(rt.max_deviation, std::abs(d - mean));
    }
    table.add("round trip deviation", rt.max_deviation <= 1e-6, rt.max_deviation,
              "<= 1e-6");

    // Derivative link 2 u_z(phi(z)) g(z) = -1 via the builder's g = -i/(t f).
    double link_dev = 0.0;
    for (int k = 0; k < 50; ++k) {
        const cplx w = sample(sd.domain);
        const cplx z = std::exp(cplx(0, -1) * w);
        const cplx g = -cplx(0, 1) / (t * bld::f_eval(input, z));
        link_dev = std::max(link_dev, std::abs(2.0 * sd.uz(w) * g + 1.0));
    }
    table.add("derivative link 2 u_z(phi) g = -1", link_dev <= 1e-8, link_dev,
              "<= 1e-8");

    if (!out.empty()) {
        ensure_out_dir(out);
        json rep{{"schema", 1},
                 {"checks", table.results},
                 {"translation",
                  {rt.translation.real(), rt.translation.imag()}}};
        io::write_json_file(rep,
                            (std::filesystem::path(out) / "correspond.json").string());
    }
    return table.all_pass ? 0 : kExitCheckFailure;
}

int check_config(const io::ConfigFile& cf, CheckTable& table) {
    if (cf.is_periodic()) {
        const auto& pc = std::get<cfg::PeriodicConfiguration>(cf.config);
        auto F = cfg::periodic_forces(pc);
        cplx sum = 0.0;
        double maxF = 0.0;
        for (cplx f : F) {
            sum += f;
            maxF = std::max(maxF, std::abs(f));
        }
        table.add("sum F_i identity", std::abs(sum) <= 1e-12, std::abs(sum), "<= 1e-12");
        if (maxF <= 1e-8) {
            auto [rank, ok] = cfg::non_degenerate(pc);
            table.add("non-degeneracy rank = n-1", ok, double(rank));
            const bld::BuilderInput input(pc, cf.build.t, cf.build.a);
            const bld::BuiltDomain built = bld::build_domain(input, 64);
            const auto [r0, rinf] = bld::residues_g_omega(input);
            const double res_dev =
                std::max(std::abs(r0 + cplx(0, 1) / input.t),
                         std::abs(rinf - cplx(0, 1) / input.t));
            table.add("residues (-i/t, i/t)", res_dev <= 1e-8, res_dev, "<= 1e-8");
            double circ_dev = 0.0;
            for (int i = 0; i < pc.n(); ++i)
                circ_dev = std::max(circ_dev,
                                    std::abs(built.circulations[i] -
                                             2.0 * 3.14159265358979323846 * input.t *
                                                 pc.weights[i]));
            table.add("circulations 2 pi t c_i", circ_dev <= 1e-8, circ_dev, "<= 1e-8");
            table.add("phi periodicity 2 pi", built.periodicity_residual <= 1e-8,
                      built.periodicity_residual, "<= 1e-8");
            cplx defect_sum = 0.0;
            for (cplx d : built.defects) defect_sum += d;
            table.add("sum of closure defects", std::abs(defect_sum) <= 1e-10,
                      std::abs(defect_sum), "<= 1e-10");
            try {
                const bld::AbReport ab = bld::prop_ab_check(built);
                table.add(std::string("classification (") + ab.classification + ")",
                          true, ab.class_residual);
            } catch (const bld::Unclassifiable&) {
                table.add("classification", false, 1.0, "unclassifiable");
            }
            // Artifact invariants: CSV round trip and self-intersection.
            const io::DomainArtifact art = bld::to_artifact(built);
            std::ostringstream oss;
            io::write_csv(art, oss);
            std::istringstream iss(oss.str());
            const io::DomainArtifact back = io::parse_csv(iss);
            bool bitexact = back.boundaries.size() == art.boundaries.size();
            for (std::size_t i = 0; bitexact && i < art.boundaries.size(); ++i)
                bitexact = back.boundaries[i].polyline == art.boundaries[i].polyline;
            table.add("CSV round trip bit-exact", bitexact, bitexact ? 0.0 : 1.0);
            bool simple = true;
            for (const auto& b : art.boundaries)
                simple = simple && !io::polyline_self_intersects(b.polyline, true);
            table.add("boundary curves simple", simple, simple ? 0.0 : 1.0);
        } else {
            table.add("balanced (max |F_i| <= 1e-8)", false, maxF,
                      "run `hvlab solve` first");
        }
    } else {
        const auto& fc = std::get<cfg::FiniteConfiguration>(cf.config);
        auto [id1, id2] = cfg::finite_identities(fc);
        table.add("sum F_i identity", std::abs(id1) <= 1e-12, std::abs(id1),
                  "<= 1e-12");
        table.add("moment identity", std::abs(id2) <= 1e-12, std::abs(id2),
                  "<= 1e-12");
        double maxF = 0.0;
        for (cplx f : cfg::finite_forces(fc)) maxF = std::max(maxF, std::abs(f));
        if (maxF <= 1e-8) {
            auto [rank, ok] = cfg::non_degenerate(fc);
            table.add("non-degeneracy rank = n-2", ok, double(rank));
        }
    }
    return 0;
}

int check_artifact_report(const json& rep, CheckTable& table) {
    // Reconstruct the circulation/velocity-limit identities from the report.
    bld::BuiltDomain built;
    built.circulations = rep.at("circulations").get<std::vector<double>>();
    built.v_plus = cplx(rep.at("v_plus")[0].get<double>(),
                        rep.at("v_plus")[1].get<double>());
    built.v_minus = cplx(rep.at("v_minus")[0].get<double>(),
                         rep.at("v_minus")[1].get<double>());
    try {
        const bld::AbReport ab = bld::prop_ab_check(built);
        table.add(std::string("classification (") + ab.classification + ")", true,
                  ab.class_residual);
        table.add("flux identity sum C = T(conj v+ - conj v-)",
                  ab.flux_residual <= 1e-5, ab.flux_residual, "<= 1e-5");
    } catch (const bld::Unclassifiable&) {
        table.add("classification", false, 1.0, "unclassifiable");
    }
    return 0;
}

int check_artifact_csv(const std::string& path, CheckTable& table) {
    const io::DomainArtifact art = io::parse_csv_file(path);
    bool finite = true, simple = true;
    auto scan = [&](const std::vector<cplx>& poly, bool closed) {
        for (cplx p : poly)
            finite = finite && std::isfinite(p.real()) && std::isfinite(p.imag());
        simple = simple && !io::polyline_self_intersects(poly, closed);
    };
    for (const auto& b : art.boundaries) scan(b.polyline, true);
    for (const auto& s : art.streamlines) scan(s.polyline, false);
    table.add("polylines finite", finite, finite ? 0.0 : 1.0);
    table.add("polylines non-self-intersecting", simple, simple ? 0.0 : 1.0);
    table.add("boundary components present", !art.boundaries.empty(),
              double(art.boundaries.size()));
    return 0;
}

int cmd_check(const std::string& path, const std::string& out) {
    CheckTable table;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        check_artifact_csv(path, table);
    } else {
        std::ifstream is(path);
        if (!is) throw io::SchemaError("cannot open " + path);
        json j;
        is >> j;
        if (j.contains("kind"))
            check_config(io::load_config(j), table);
        else if (j.contains("circulations"))
            check_artifact_report(j, table);
        else
            throw io::SchemaError(
                "unrecognized input: expected a configuration file, a domain "
                "report.json, or a domain.csv");
    }
    if (!out.empty()) {
        ensure_out_dir(out);
        io::write_json_file(json{{"schema", 1}, {"checks", table.results}},
                            (std::filesystem::path(out) / "check.json").string());
    }
    return table.all_pass ? 0 : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hollow-vortex domains, balanced configurations, and minimal "
                 "graph correspondences"};
    app.require_subcommand(1);

    std::string config_path, out_dir, name;
    double tol = 1e-10, t_flag = 0.0, a_flag = 0.0;
    int grid = 0, tiles = 3;
    unsigned seed = 12345;

    auto* forces = app.add_subcommand("forces", "interaction forces and identities");
    forces->add_option("config", config_path, "configuration JSON")->required();
    forces->add_option("--out", out_dir, "output directory for forces.json");

    auto* solve = app.add_subcommand("solve", "Newton-balance a configuration");
    solve->add_option("config", config_path, "configuration JSON")->required();
    solve->add_option("--tol", tol, "force tolerance (default 1e-10)");
    solve->add_option("--out", out_dir, "output directory for balanced.json");

    auto* build = app.add_subcommand("build", "construct a periodic vortex domain");
    build->add_option("config", config_path, "periodic configuration JSON")->required();
    build->add_option("--t", t_flag, "perturbation parameter (default: config)");
    build->add_option("--grid", grid, "stream-function grid (default 256)");
    build->add_option("--tiles", tiles, "periods tiled in the SVG (default 3)");
    build->add_option("--out", out_dir, "output directory")->default_val(".");

    auto* classical =
        app.add_subcommand("classical", "domain of a classical minimal surface");
    classical
        ->add_option("name", name, "scherk | karcher | schwarzP | schwarzH")
        ->required();
    classical->add_option("--a", a_flag, "shape parameter (karcher/schwarzH)");
    classical->add_option("--grid", grid, "sampling grid (default 400)");
    classical->add_option("--tiles", tiles, "periods tiled in the SVG (default 3)");
    classical->add_option("--out", out_dir, "output directory")->default_val(".");

    auto* correspond = app.add_subcommand(
        "correspond", "vortex/minimal-graph round trip on a built domain");
    correspond->add_option("config", config_path, "periodic configuration JSON")
        ->required();
    correspond->add_option("--t", t_flag, "perturbation parameter (default: config)");
    correspond->add_option("--grid", grid, "forward-cache resolution")->default_val(96);
    correspond->add_option("--tol", tol, "inverse-map tolerance (default 1e-10)");
    correspond->add_option("--seed", seed, "random probe seed (default 12345)");
    correspond->add_option("--out", out_dir, "output directory for correspond.json");

    auto* check = app.add_subcommand("check", "run the invariant suite");
    check->add_option("input", config_path,
                      "configuration JSON, report.json, or domain.csv")
        ->required();
    check->add_option("--out", out_dir, "output directory for check.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (forces->parsed()) return cmd_forces(config_path, out_dir);
        if (solve->parsed()) return cmd_solve(config_path, tol, out_dir);
        if (build->parsed())
            return cmd_build(config_path, t_flag, grid, tiles, out_dir);
        if (classical->parsed()) {
            try {
                return cmd_classical(name, a_flag, grid > 0 ? grid : 400, tiles,
                                     out_dir);
            } catch (const wst::ParameterOutOfRange& e) {
                std::fprintf(stderr, "input error: %s\n", e.what());
                return kExitInputError;
            }
        }
        if (correspond->parsed())
            return cmd_correspond(config_path, t_flag, grid > 0 ? grid : 96, tol, seed,
                                  out_dir);
        if (check->parsed()) return cmd_check(config_path, out_dir);
    } catch (const io::SchemaError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const cfg::ParameterOutOfRange& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const cfg::CoincidentPoints& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const num::NoConvergence& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolverFailure;
    } catch (const num::SingularJacobian& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolverFailure;
    } catch (const bld::ComponentsMerged& e) {
        std::fprintf(stderr, "geometry failure: %s\n", e.what());
        return kExitGeometryFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "geometry failure: %s\n", e.what());
        return kExitGeometryFailure;
    }
    return 0;
}
