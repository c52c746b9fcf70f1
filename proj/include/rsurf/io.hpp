#ifndef RSURF_IO_HPP
#define RSURF_IO_HPP

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsurf/jacobian.hpp"

namespace rsurf {

using json = nlohmann::json;

struct CliOptions {
    double tol = 1e-9;        // fiber/tracking residual tolerance
    int quad_order = 32;      // starting Chebyshev node count
    int newton_steps = 16;    // Jacobi-inversion increments
    std::optional<cplx> base_point;
};

struct CurveSpec {
    BivariatePoly F;
    CliOptions options;
    json raw; // parsed input, echoed into result envelopes
};

namespace io_detail {

inline cplx parse_cplx(const json& v, const char* what) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    throw domain_error(std::string("curve spec: expected number or [re, im] for ") + what);
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                           const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw domain_error(std::string("unknown key '") + it.key() + "' in " + where);
    }
}

} // namespace io_detail

/// Parse the curve-spec JSON: schema_version, monomials (i, j, re, im) and
/// an optional options block. Unknown keys are rejected.
inline CurveSpec parse_curve_spec(const json& j) {
    if (!j.is_object()) throw domain_error("curve spec: top level must be an object");
    io_detail::reject_unknown(j, {"schema_version", "monomials", "options"}, "curve spec");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != 1)
        throw domain_error("curve spec: schema_version must be 1");
    if (!j.contains("monomials") || !j["monomials"].is_array() || j["monomials"].empty())
        throw domain_error("curve spec: monomials array required");

    std::vector<std::tuple<int, int, cplx>> monomials;
    for (const auto& m : j["monomials"]) {
        if (!m.is_array() || m.size() != 4)
            throw domain_error("curve spec: each monomial is [i, j, re, im]");
        monomials.emplace_back(m[0].get<int>(), m[1].get<int>(),
                               cplx(m[2].get<double>(), m[3].get<double>()));
    }

    CurveSpec spec{BivariatePoly::from_monomials(monomials), {}, j};
    if (j.contains("options")) {
        const json& o = j["options"];
        io_detail::reject_unknown(
            o, {"tol", "base_point", "quad_order", "newton_steps"}, "options");
        if (o.contains("tol")) spec.options.tol = o["tol"].get<double>();
        if (o.contains("quad_order")) spec.options.quad_order = o["quad_order"].get<int>();
        if (o.contains("newton_steps"))
            spec.options.newton_steps = o["newton_steps"].get<int>();
        if (o.contains("base_point"))
            spec.options.base_point = io_detail::parse_cplx(o["base_point"], "base_point");
    }
    return spec;
}

inline CurveSpec load_curve_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open curve spec file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw domain_error(std::string("curve spec is not valid JSON: ") + e.what());
    }
    return parse_curve_spec(j);
}

/// FNV-1a over the canonical monomial serialization.
inline std::string curve_hash(const CurveSpec& spec) {
    std::ostringstream os;
    const auto& F = spec.F;
    for (int jw = 0; jw <= F.deg_w(); ++jw)
        for (int iz = 0; iz <= F.w_coeff(jw).degree(); ++iz) {
            cplx a = F.w_coeff(jw).coeff(iz);
            if (a != cplx(0.0)) os << iz << "," << jw << "," << a.real() << "," << a.imag() << ";";
        }
    std::string s = os.str();
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

inline json to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline json to_json(const CurvePoint& p) {
    switch (p.kind) {
        case PointKind::regular:
            return {{"z", to_json(p.z)}, {"sheet", p.sheet}, {"w", to_json(p.w)}};
        case PointKind::branch:
            return {{"branch", to_json(p.z)}};
        case PointKind::infinity_pt:
            return {{"infinity", p.inf_index}};
    }
    return {};
}

inline json to_json(const Divisor& d) {
    json arr = json::array();
    for (const auto& [pt, n] : d.terms()) arr.push_back({{"point", to_json(pt)}, {"coeff", n}});
    return arr;
}

inline json to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c2 = 0; c2 < m.cols(); ++c2) row.push_back(to_json(m(r, c2)));
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const JacobianPoint& p) {
    json coords = json::array(), rep = json::array();
    for (int i = 0; i < p.coords.size(); ++i) coords.push_back(p.coords(i));
    for (int i = 0; i < p.rep.size(); ++i) rep.push_back(to_json(p.rep(i)));
    return {{"coords", coords}, {"rep", rep}};
}

inline UniPoly parse_poly(const json& arr, const char* what) {
    if (!arr.is_array()) throw domain_error(std::string(what) + ": coefficient array expected");
    std::vector<cplx> c;
    for (const auto& v : arr) c.push_back(io_detail::parse_cplx(v, what));
    return UniPoly(std::move(c));
}

/// Function file: R and S blocks with num/den coefficient lists (ascending).
inline CurveFunction parse_function(const json& j) {
    io_detail::reject_unknown(j, {"R", "S"}, "function file");
    CurveFunction f;
    auto parse_rational = [](const json& r, const char* what) {
        Rational out;
        io_detail::reject_unknown(r, {"num", "den"}, what);
        if (r.contains("num")) out.num = parse_poly(r["num"], what);
        if (r.contains("den")) out.den = parse_poly(r["den"], what);
        if (out.den.is_zero()) throw domain_error(std::string(what) + ": zero denominator");
        return out;
    };
    if (j.contains("R")) f.R = parse_rational(j["R"], "R");
    if (j.contains("S")) f.S = parse_rational(j["S"], "S");
    return f;
}

inline CurvePoint parse_point(const json& j, const Curve& c) {
    io_detail::reject_unknown(j, {"z", "sheet", "w", "branch", "infinity"}, "point");
    if (j.contains("branch")) {
        cplx z = io_detail::parse_cplx(j["branch"], "branch");
        for (const auto& b : c.finite_branch_points())
            if (std::abs(b.z - z) < 1e-6 * std::max(1.0, std::abs(z)))
                return CurvePoint::branch(b.z);
        throw domain_error("point: not a branch point of the curve");
    }
    if (j.contains("infinity")) return CurvePoint::infinity(j["infinity"].get<int>());
    if (!j.contains("z")) throw domain_error("point: needs z, branch or infinity");
    cplx z = io_detail::parse_cplx(j["z"], "z");
    int sheet = j.contains("sheet") ? j["sheet"].get<int>() : 1;
    Fiber f = c.fiber(z);
    if (sheet < 1 || sheet > static_cast<int>(f.size()))
        throw domain_error("point: sheet out of range");
    return CurvePoint::regular(z, sheet, f[sheet - 1]);
}

inline Divisor parse_divisor(const json& j, const Curve& c) {
    if (!j.is_array()) throw domain_error("divisor file: array of terms expected");
    Divisor d;
    for (const auto& term : j) {
        io_detail::reject_unknown(term, {"point", "coeff"}, "divisor term");
        if (!term.contains("point") || !term.contains("coeff"))
            throw domain_error("divisor term: needs point and coeff");
        d.add(parse_point(term["point"], c), term["coeff"].get<int>());
    }
    return d;
}

/// Target file for inversion: reduced lattice coordinates or a representative.
inline JacobianPoint parse_target(const json& j, const Lattice& L) {
    io_detail::reject_unknown(j, {"coords", "rep"}, "target file");
    if (j.contains("coords")) {
        const auto& arr = j["coords"];
        if (!arr.is_array() || static_cast<int>(arr.size()) != 2 * L.g)
            throw domain_error("target: coords must have 2g entries");
        Eigen::VectorXd coords(2 * L.g);
        for (int i = 0; i < 2 * L.g; ++i) coords(i) = arr[i].get<double>();
        JacobianPoint p;
        p.coords = coords;
        p.rep = L.gens * coords.cast<cplx>();
        return p;
    }
    if (j.contains("rep")) {
        const auto& arr = j["rep"];
        if (!arr.is_array() || static_cast<int>(arr.size()) != L.g)
            throw domain_error("target: rep must have g entries");
        Eigen::VectorXcd v(L.g);
        for (int i = 0; i < L.g; ++i) v(i) = io_detail::parse_cplx(arr[i], "rep");
        return reduce_mod_lattice(v, L);
    }
    throw domain_error("target: needs coords or rep");
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw domain_error(std::string("not valid JSON: ") + e.what());
    }
    return j;
}

/// Result envelope shared by all CLI verbs.
inline json make_envelope(const std::string& command, const CurveSpec& spec,
                          const json& inputs, const json& outputs, const json& diagnostics,
                          double wall_ms) {
    return {{"command", command},
            {"curve_hash", curve_hash(spec)},
            {"inputs", inputs},
            {"outputs", outputs},
            {"diagnostics", diagnostics},
            {"tool_version", "0.1.0"},
            {"wall_time_ms", wall_ms}};
}

} // namespace rsurf

#endif // RSURF_IO_HPP
