// Command-line surface around the rsurf library: curve analysis verbs that
// read curve-spec JSON files and emit result envelopes.

#include <chrono>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "rsurf/io.hpp"
#include "rsurf/rsurf.hpp"

using namespace rsurf;

namespace {

struct CommonArgs {
    std::string curve_file;
    std::string json_out;
    std::string csv_out;
    double tol = -1.0;
    int quad_order = -1;
    int newton_steps = -1;
    unsigned long long seed = 12345;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_csv = false) {
    cmd->add_option("curve", args.curve_file, "curve spec JSON file")->required();
    cmd->add_option("--json-out", args.json_out, "write the result envelope to PATH");
    if (with_csv) cmd->add_option("--csv-out", args.csv_out, "write plot data CSV to PATH");
    cmd->add_option("--tol", args.tol, "residual tolerance override");
    cmd->add_option("--quad-order", args.quad_order, "starting quadrature node count");
    cmd->add_option("--newton-steps", args.newton_steps, "inversion increments");
    cmd->add_option("--seed", args.seed, "RNG seed for generated seed divisors");
}

CurveSpec load_spec(const CommonArgs& args) {
    CurveSpec spec = load_curve_spec(args.curve_file);
    if (args.tol > 0) spec.options.tol = args.tol;
    if (args.quad_order > 0) spec.options.quad_order = args.quad_order;
    if (args.newton_steps > 0) spec.options.newton_steps = args.newton_steps;
    return spec;
}

Curve make_curve(const CurveSpec& spec) {
    CurveOptions copt;
    copt.fiber_tol = spec.options.tol;
    copt.base_point = spec.options.base_point;
    return Curve(spec.F, copt);
}

PeriodOptions period_options(const CurveSpec& spec) {
    PeriodOptions popt;
    popt.cheb_start = spec.options.quad_order;
    return popt;
}

void emit(const json& envelope, const CommonArgs& args) {
    if (!args.json_out.empty()) {
        std::ofstream out(args.json_out);
        if (!out) throw domain_error("cannot write " + args.json_out);
        out << envelope.dump(2) << "\n";
    } else {
        std::cout << envelope.dump(2) << "\n";
    }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

json perm_json(const std::vector<int>& pi) {
    json arr = json::array();
    for (int v : pi) arr.push_back(v + 1); // 1-based sheets in reports
    return arr;
}

json cycle_type_json(const std::vector<std::pair<int, int>>& ct) {
    json arr = json::array();
    for (auto [len, cnt] : ct) arr.push_back({{"length", len}, {"count", cnt}});
    return arr;
}

int run_genus(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    CurveSpec spec = load_spec(args);
    Curve c = make_curve(spec);
    MonodromyData md = monodromy(c);
    RamificationProfile rp = ramification_profile(md);
    int g = genus(c, md);
    json outputs = {{"genus", g},
                    {"sheets", rp.sheets},
                    {"ramification_index_sum", rp.V},
                    {"connected", is_connected(md)}};
    json diag = {{"branch_points", md.branch_points.size()}};
    emit(make_envelope("genus", spec, spec.raw, outputs, diag, ms_since(t0)), args);
    return 0;
}

int run_branch(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    CurveSpec spec = load_spec(args);
    Curve c = make_curve(spec);
    BranchLocus bl = branch_locus(c);
    json pts = json::array();
    for (const auto& b : bl.finite_points)
        pts.push_back({{"z", to_json(b.z)},
                       {"source", b.source == BranchSource::p0_zero ? "p0_zero" : "disc_zero"}});
    json outputs = {{"finite_points", pts}, {"includes_infinity", bl.includes_infinity}};
    if (!args.csv_out.empty()) {
        std::ofstream csv(args.csv_out);
        csv << "re,im,source\n";
        for (const auto& b : bl.finite_points)
            csv << b.z.real() << "," << b.z.imag() << ","
                << (b.source == BranchSource::p0_zero ? "p0_zero" : "disc_zero") << "\n";
    }
    emit(make_envelope("branch", spec, spec.raw, outputs, json::object(), ms_since(t0)), args);
    return 0;
}

int run_monodromy(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    CurveSpec spec = load_spec(args);
    Curve c = make_curve(spec);
    MonodromyData md = monodromy(c);
    json per_point = json::array();
    for (size_t j = 0; j < md.perms.size(); ++j)
        per_point.push_back({{"z", to_json(md.branch_points[j])},
                             {"permutation", perm_json(md.perms[j])},
                             {"cycle_type", cycle_type_json(cycle_type(md.perms[j]))}});
    json outputs = {{"branch_points", per_point},
                    {"infinity_permutation", perm_json(md.perm_infinity)},
                    {"infinity_cycle_type", cycle_type_json(cycle_type(md.perm_infinity))},
                    {"transitive", is_connected(md)}};
    emit(make_envelope("monodromy", spec, spec.raw, outputs, json::object(), ms_since(t0)),
         args);
    return 0;
}

int run_periods(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    CurveSpec spec = load_spec(args);
    Curve c = make_curve(spec);
    HomologyBasis hb = homology_basis(c);
    PeriodMatrix pm = period_matrix(c, differential_basis(c), hb, period_options(spec));
    json outputs = {{"E", to_json(pm.E)},
                    {"F", to_json(pm.F)},
                    {"Z", to_json(pm.Z)},
                    {"real_independent", real_independence(pm.omega())}};
    json diag = {{"bilinear_residual", pm.bilinear_residual},
                 {"symmetry_residual", pm.symmetry_residual},
                 {"hermitian_residual", pm.hermitian_residual},
                 {"min_imag_eigenvalue", pm.min_imag_eigenvalue},
                 {"quadrature_err", pm.quadrature_err},
                 {"orientation_flipped", pm.flipped_orientation}};
    if (!args.csv_out.empty()) {
        std::ofstream csv(args.csv_out);
        csv << "cycle,idx,re,im\n";
        for (int k = 0; k < hb.g; ++k) {
            int i = 0;
            for (cplx wp : hb.a[k].waypoints)
                csv << "a" << (k + 1) << "," << i++ << "," << wp.real() << "," << wp.imag()
                    << "\n";
            i = 0;
            for (cplx wp : hb.b[k].waypoints)
                csv << "b" << (k + 1) << "," << i++ << "," << wp.real() << "," << wp.imag()
                    << "\n";
        }
    }
    emit(make_envelope("periods", spec, spec.raw, outputs, diag, ms_since(t0)), args);
    return 0;
}

int run_rr(const CommonArgs& args, const std::string& divisor_file) {
    auto t0 = std::chrono::steady_clock::now();
    CurveSpec spec = load_spec(args);
    Curve c = make_curve(spec);
    json divisor_json = load_json(divisor_file);
    Divisor d = parse_divisor(divisor_json, c);
    int g = curve_genus(c);
    int dim_i = dim_I_minus(c, d);
    int dim_l = dim_L(c, d);
    json outputs = {{"genus", g},
                    {"deg", d.degree()},
                    {"dim_L", dim_l},
                    {"dim_I_minus", dim_i},
                    {"chi", chi(d, g)},
                    {"canonical_degree", canonical_degree(g)},
                    {"divisor", to_json(d)}};
    emit(make_envelope("rr", spec, {{"curve", spec.raw}, {"divisor", divisor_json}}, outputs,
                       json::object(), ms_since(t0)),
         args);
    return 0;
}

int run_abel(const CommonArgs& args, const std::string& function_file) {
    auto t0 = std::chrono::steady_clock::now();
    CurveSpec spec = load_spec(args);
    Curve c = make_curve(spec);
    json function_json = load_json(function_file);
    CurveFunction f = parse_function(function_json);
    JacobianContext ctx = make_jacobian(c, period_options(spec));
    Divisor div = principal_divisor(c, f);
    auto [image, principal] = abel_check(c, ctx, f);
    json outputs = {{"divisor", to_json(div)},
                    {"image", to_json(image)},
                    {"principal", principal}};
    json diag = {{"lattice_distance", lattice_distance_to_zero(image, ctx.L)}};
    emit(make_envelope("abel", spec, {{"curve", spec.raw}, {"function", function_json}},
                       outputs, diag, ms_since(t0)),
         args);
    return 0;
}

int run_invert(const CommonArgs& args, const std::string& target_file) {
    auto t0 = std::chrono::steady_clock::now();
    CurveSpec spec = load_spec(args);
    Curve c = make_curve(spec);
    JacobianContext ctx = make_jacobian(c, period_options(spec));
    json target_json = load_json(target_file);
    JacobianPoint target = parse_target(target_json, ctx.L);

    // seed divisor: random regular points, rejected until general
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double scale = 1.0;
    for (cplx z : ctx.hb.points) scale = std::max(scale, std::abs(z));
    Divisor seed;
    for (int attempt = 0; attempt < 64; ++attempt) {
        seed = Divisor();
        for (int k = 0; k < ctx.L.g; ++k) {
            cplx z;
            do {
                z = cplx(u(rng), u(rng)) * (1.5 * scale) + cplx(0.0, 0.3 * scale);
            } while (c.dist_to_branch(z) < 4.0 * c.margin());
            Fiber f = c.fiber(z);
            seed.add(CurvePoint::regular(z, 1, f[0]), 1);
        }
        if (seed.degree() == ctx.L.g && is_general(c, seed)) break;
    }
    Divisor out = jacobi_invert(c, ctx, target, seed, spec.options.newton_steps);
    JacobianPoint image = abel_jacobi(c, ctx, out);
    double residual =
        lattice_distance_to_zero(reduce_mod_lattice(image.rep - target.rep, ctx.L), ctx.L);
    json outputs = {{"divisor", to_json(out)}, {"image", to_json(image)}};
    json diag = {{"residual", residual}, {"increments", spec.options.newton_steps}};
    emit(make_envelope("invert", spec, {{"curve", spec.raw}, {"target", target_json}},
                       outputs, diag, ms_since(t0)),
         args);
    return 0;
}

int run_resultant(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    json j = load_json(args.curve_file); // here the positional file holds f and g
    io_detail::reject_unknown(j, {"f", "g"}, "resultant input");
    if (!j.contains("f")) throw domain_error("resultant: needs f");
    UniPoly f = parse_poly(j["f"], "f");
    json outputs;
    outputs["discriminant_f"] = to_json(discriminant(f));
    outputs["discriminant_exact"] = bool(discriminant_exact(f));
    if (j.contains("g")) {
        UniPoly g = parse_poly(j["g"], "g");
        outputs["resultant"] = to_json(resultant(f, g));
        outputs["resultant_exact"] = bool(resultant_exact(f, g));
    }
    json envelope = {{"command", "resultant"},
                     {"inputs", j},
                     {"outputs", outputs},
                     {"diagnostics", json::object()},
                     {"tool_version", "0.1.0"},
                     {"wall_time_ms", ms_since(t0)}};
    emit(envelope, args);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rsurf: compact Riemann surfaces of plane algebraic curves"};
    app.require_subcommand(1);

    CommonArgs a_genus, a_branch, a_mono, a_per, a_rr, a_abel, a_inv, a_res;
    std::string divisor_file, function_file, target_file;

    add_common(app.add_subcommand("genus", "genus via Riemann-Hurwitz"), a_genus);
    add_common(app.add_subcommand("branch", "branch locus"), a_branch, true);
    add_common(app.add_subcommand("monodromy", "sheet permutations"), a_mono);
    add_common(app.add_subcommand("periods", "period matrix and diagnostics"), a_per, true);
    auto* rr = app.add_subcommand("rr", "Riemann-Roch dimensions");
    add_common(rr, a_rr);
    rr->add_option("divisor", divisor_file, "divisor JSON file")->required();
    auto* abel = app.add_subcommand("abel", "Abel-Jacobi image of a principal divisor");
    add_common(abel, a_abel);
    abel->add_option("function", function_file, "function JSON file")->required();
    auto* inv = app.add_subcommand("invert", "Jacobi inversion of a target point");
    add_common(inv, a_inv);
    inv->add_option("target", target_file, "target JSON file")->required();
    add_common(app.add_subcommand("resultant", "resultant/discriminant of polynomials"),
               a_res);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("genus")) return run_genus(a_genus);
        if (app.got_subcommand("branch")) return run_branch(a_branch);
        if (app.got_subcommand("monodromy")) return run_monodromy(a_mono);
        if (app.got_subcommand("periods")) return run_periods(a_per);
        if (app.got_subcommand("rr")) return run_rr(a_rr, divisor_file);
        if (app.got_subcommand("abel")) return run_abel(a_abel, function_file);
        if (app.got_subcommand("invert")) return run_invert(a_inv, target_file);
        if (app.got_subcommand("resultant")) return run_resultant(a_res);
    } catch (const domain_error& e) {
        std::cerr << "error (invalid input): " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return 3;
    } catch (const internal_error& e) {
        std::cerr << "error (internal inconsistency): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 1;
}
