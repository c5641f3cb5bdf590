#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <lamegf/bem2d.hpp>
#include <lamegf/green2d.hpp>
#include <lamegf/green3d_biqp.hpp>
#include <lamegf/green3d_qp.hpp>
#include <lamegf/phaseless.hpp>
#include <lamegf/rayleigh.hpp>

#include "suites.hpp"

using json = nlohmann::ordered_json;
using namespace lamegf;

namespace {

struct Args {
    std::string cmd, action, config, out, suite, geometry;
    int threads = 1;
    std::uint64_t seed = 20240601;
};

// ---- config access ----

const json* find(const json& j, const std::string& path)
{
    const json* cur = &j;
    std::stringstream ss(path);
    std::string key;
    while (std::getline(ss, key, '.')) {
        if (!cur->is_object() || !cur->contains(key))
            return nullptr;
        cur = &(*cur)[key];
    }
    return cur;
}

double req_num(const json& j, const std::string& path)
{
    const json* v = find(j, path);
    if (!v)
        fail(ErrorKind::ConfigError, "missing field '" + path + "'");
    if (!v->is_number())
        fail(ErrorKind::ConfigError, "field '" + path + "' must be a number");
    return v->get<double>();
}

template <class T>
T opt_val(const json& j, const std::string& path, T def)
{
    const json* v = find(j, path);
    if (!v || v->is_null())
        return def;
    try {
        return v->get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::ConfigError, "field '" + path + "' has the wrong type");
    }
}

std::vector<double> num_list(const json& j, const std::string& path, std::vector<double> def = {})
{
    return opt_val<std::vector<double>>(j, path, def);
}

Vec2 vec2(const json& j, const std::string& path, Vec2 def)
{
    const auto v = num_list(j, path, {def(0), def(1)});
    if (v.size() != 2)
        fail(ErrorKind::ConfigError, "field '" + path + "' must have 2 entries");
    return {v[0], v[1]};
}

std::string geometry_of(const json& cfg, const Args& a)
{
    std::string g = a.geometry.empty() ? opt_val<std::string>(cfg, "geometry", "qp2d") : a.geometry;
    if (g != "qp2d" && g != "qp3d" && g != "biqp3d")
        fail(ErrorKind::ConfigError, "field 'geometry' must be qp2d, qp3d or biqp3d");
    return g;
}

ElasticMedium medium_of(const json& cfg, json& res)
{
    const double lam = req_num(cfg, "medium.lambda"), mu = req_num(cfg, "medium.mu");
    const double rho = req_num(cfg, "medium.rho"), om = req_num(cfg, "medium.omega");
    const double eta = opt_val<double>(cfg, "medium.eta", 0.0);
    res["medium"] = {{"lambda", lam}, {"mu", mu}, {"rho", rho}, {"omega", om}, {"eta", eta}};
    return make_medium(lam, mu, rho, om, eta);
}

QuasiMomentum momentum_of(const json& cfg, const std::string& g, json& res)
{
    const double a = opt_val<double>(cfg, "quasi_momentum.alpha", 0.0);
    const double a2 = opt_val<double>(cfg, "quasi_momentum.alpha2", 0.0);
    res["quasi_momentum"] = {{"alpha", a}, {"alpha2", a2}};
    if (g == "qp3d")
        return qp3d(a);
    if (g == "biqp3d")
        return biqp(a, a2);
    return qp2d(a);
}

struct Trunc {
    double tol, gap_min, tol_wood;
};

Trunc truncation_of(const json& cfg, const std::string& g, json& res)
{
    const double gdef = g == "qp2d" ? default_gap_min_2d : (g == "qp3d" ? default_gap_min_3d : default_gap_min_bi);
    Trunc t{opt_val<double>(cfg, "truncation.tol", 1e-12), opt_val<double>(cfg, "truncation.gap_min", gdef),
            opt_val<double>(cfg, "truncation.tol_wood", default_tol_wood)};
    res["truncation"] = {{"tol", t.tol}, {"gap_min", t.gap_min}, {"tol_wood", t.tol_wood}};
    return t;
}

ProfileCurve2 profile_of(const json& cfg, const std::string& key, json& res)
{
    ProfileCurve2 p;
    p.c0 = opt_val<double>(cfg, key + ".c0", 0.0);
    p.a = num_list(cfg, key + ".a");
    p.b = num_list(cfg, key + ".b");
    res[key] = {{"c0", p.c0}, {"a", p.a}, {"b", p.b}};
    return p;
}

// ---- output ----

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const Args& a, const std::string& text)
{
    if (a.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(a.out, std::ios::binary);
    if (!f)
        fail(ErrorKind::ConfigError, "cannot write '" + a.out + "'");
    f << text;
}

json cplx(cdouble z) { return json::array({z.real(), z.imag()}); }

// ---- eval ----

std::vector<double> axis(const json& cfg, const std::string& path, json& res)
{
    const json* v = find(cfg, path);
    if (!v)
        fail(ErrorKind::ConfigError, "missing field '" + path + "'");
    const double lo = req_num(cfg, path + ".min"), hi = req_num(cfg, path + ".max");
    const int n = opt_val<int>(cfg, path + ".n", 1);
    if (n < 1)
        fail(ErrorKind::ConfigError, "field '" + path + ".n' must be >= 1");
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    json* r = &res;
    std::stringstream ss(path);
    std::string key;
    while (std::getline(ss, key, '.'))
        r = &(*r)[key];
    *r = {{"min", lo}, {"max", hi}, {"n", n}};
    return x;
}

int cmd_eval(const Args& a, const json& cfg)
{
    json res;
    const std::string g = geometry_of(cfg, a);
    res["geometry"] = g;
    const auto med = medium_of(cfg, res);
    const auto q = momentum_of(cfg, g, res);
    const Trunc t = truncation_of(cfg, g, res);
    const int D = g == "qp2d" ? 2 : 3;
    const auto y = num_list(cfg, "eval.y", std::vector<double>(D, 0.0));
    if (int(y.size()) != D)
        fail(ErrorKind::ConfigError, "field 'eval.y' must have " + std::to_string(D) + " entries");
    res["eval"]["y"] = y;
    const auto x1 = axis(cfg, "eval.x1", res), x2 = axis(cfg, "eval.x2", res);
    const auto x3 = D == 3 ? axis(cfg, "eval.x3", res) : std::vector<double>{0.0};

    std::ostringstream os;
    os << "# config: " << res.dump() << "\n";
    os << "x1,x2" << (D == 3 ? ",x3" : "");
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            os << ",G" << i + 1 << j + 1 << "_re,G" << i + 1 << j + 1 << "_im";
    os << ",modes_used,tail_bound\n";
    for (double u : x1)
        for (double v : x2)
            for (double w : x3) {
                GreenEval e;
                if (g == "qp2d")
                    e = green2d_eval(med, q, Vec2(u, v), Vec2(y[0], y[1]), Green2DOptions{t.tol, t.gap_min, t.tol_wood});
                else if (g == "qp3d")
                    e = green3dqp_eval(med, q, Vec3(u, v, w), Vec3(y[0], y[1], y[2]), Green3DOptions{t.tol, t.gap_min, t.tol_wood});
                else
                    e = greenbi_eval(med, q, Vec3(u, v, w), Vec3(y[0], y[1], y[2]), GreenBiOptions{t.tol, t.gap_min, t.tol_wood});
                os << num(u) << "," << num(v);
                if (D == 3)
                    os << "," << num(w);
                for (int i = 0; i < D; ++i)
                    for (int j = 0; j < D; ++j)
                        os << "," << num(e.value(i, j).real()) << "," << num(e.value(i, j).imag());
                os << "," << e.modes_used << "," << num(e.tail_bound) << "\n";
            }
    emit(a, os.str());
    return 0;
}

// ---- verify ----

int cmd_verify(const Args& a, const json& cfg)
{
    json res;
    const std::string suite = a.suite.empty() ? opt_val<std::string>(cfg, "verify.suite", "") : a.suite;
    if (suite.empty())
        fail(ErrorKind::ConfigError, "missing field 'verify.suite' (or --suite)");
    const auto& names = suites::suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end())
        fail(ErrorKind::ConfigError, "unknown suite '" + suite + "'");
    std::string geom = a.geometry.empty() ? opt_val<std::string>(cfg, "geometry", "all") : a.geometry;
    if (geom != "all" && geom != "qp2d" && geom != "qp3d" && geom != "biqp3d")
        fail(ErrorKind::ConfigError, "field 'geometry' must be all, qp2d, qp3d or biqp3d");
    res["verify"] = {{"suite", suite}, {"seed", a.seed}, {"geometry", geom}, {"threads", a.threads}};
    const auto r = suites::run(suite, a.seed, geom);
    json rep;
    rep["config"] = res;
    rep["suite"] = suite;
    rep["seed"] = a.seed;
    rep["pass"] = r.pass();
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"worst", c.worst}, {"limit", c.limit}, {"pass", c.pass}});
    rep["checks"] = checks;
    emit(a, rep.dump(2) + "\n");
    return r.pass() ? 0 : 1;
}

// ---- solve2d ----

IncidentField incident_of(const json& cfg, const std::string& key, json& res)
{
    const std::string kind = opt_val<std::string>(cfg, key + ".kind", "plane_p");
    json& r = res;
    if (kind == "plane_p" || kind == "plane_s") {
        const double th = opt_val<double>(cfg, key + ".theta", 0.0);
        r = {{"kind", kind}, {"theta", th}};
        return kind == "plane_p" ? plane_p(th) : plane_s(th);
    }
    if (kind == "point") {
        const Vec2 z = vec2(cfg, key + ".z", Vec2(0.5, 0.5));
        const Vec2 p = vec2(cfg, key + ".pol", Vec2(1.0, 0.0));
        r = {{"kind", kind}, {"z", {z(0), z(1)}}, {"pol", {p(0), p(1)}}};
        return point_source(z, p);
    }
    fail(ErrorKind::ConfigError, "field '" + key + ".kind' must be plane_p, plane_s or point");
}

json coeffs_json(const RayleighCoeffs2& c, int M)
{
    json arr = json::array();
    for (const auto& t : c.terms)
        if (std::abs(t.mode.m) <= M)
            arr.push_back({{"m", t.mode.m},
                           {"alpha", t.mode.alpha_l},
                           {"propagating_p", t.mode.beta.imag() == 0.0},
                           {"propagating_s", t.mode.gamma.imag() == 0.0},
                           {"up", cplx(t.up)},
                           {"us", cplx(t.us)}});
    return arr;
}

int cmd_solve2d(const Args& a, const json& cfg)
{
    json res;
    res["geometry"] = "qp2d";
    const auto med = medium_of(cfg, res);
    const auto prof = profile_of(cfg, "profile", res);
    json incr;
    const auto inc = incident_of(cfg, "solver.incident", incr);
    QuasiMomentum q = inc.kind == IncidentKind::PointSource ? qp2d(opt_val<double>(cfg, "quasi_momentum.alpha", 0.0))
                                                           : incident_momentum(med, inc);
    res["quasi_momentum"] = {{"alpha", q.alpha}, {"alpha2", 0.0}};
    const int N = opt_val<int>(cfg, "solver.N", 128);
    const int M = opt_val<int>(cfg, "solver.report_modes", 5);
    const int Ns = opt_val<int>(cfg, "solver.flux_samples", 256);
    BemOptions bo;
    bo.proxies = opt_val<int>(cfg, "solver.proxies", bo.proxies);
    bo.rayleigh_K = opt_val<int>(cfg, "solver.rayleigh_K", bo.rayleigh_K);
    const auto sol = solve_dirichlet(med, q, prof, inc, N, bo);
    const double h = opt_val<double>(cfg, "solver.flux_height", sol.H_top + 0.1);
    res["solver"] = {{"N", N},
                     {"incident", incr},
                     {"report_modes", M},
                     {"flux_samples", Ns},
                     {"flux_height", h},
                     {"proxies", bo.proxies},
                     {"rayleigh_K", bo.rayleigh_K}};
    const auto eb = energy_balance(sol, h, Ns);
    json out;
    out["config"] = res;
    out["rcond"] = sol.rcond;
    out["boundary_residual"] = boundary_residual(sol);
    out["energy"] = {{"incident", eb.incident}, {"scattered", eb.scattered}, {"total", eb.total}, {"relative", eb.relative()}};
    out["rayleigh"] = {{"above", sol.H_top}, {"coefficients", coeffs_json(sol.top, M)}};
    json dens = json::array();
    for (int j = 0; j < sol.N; ++j)
        dens.push_back({{"t", double(j) / sol.N}, {"psi1", cplx(sol.density[j](0))}, {"psi2", cplx(sol.density[j](1))}});
    out["density"] = dens;
    emit(a, out.dump(2) + "\n");
    return 0;
}

// ---- rayleigh ----

int cmd_rayleigh(const Args& a, const json& cfg)
{
    json res;
    res["geometry"] = "qp2d";
    const auto med = medium_of(cfg, res);
    const auto q = momentum_of(cfg, "qp2d", res);
    if (a.action == "extract") {
        const double h = req_num(cfg, "rayleigh.h");
        const int M = opt_val<int>(cfg, "rayleigh.M", 5);
        const double x0 = opt_val<double>(cfg, "rayleigh.x0", 0.0);
        const json* s = find(cfg, "rayleigh.samples");
        if (!s || !s->is_array())
            fail(ErrorKind::ConfigError, "missing field 'rayleigh.samples'");
        std::vector<CVec2> samples;
        for (const auto& row : *s) {
            const auto v = row.get<std::vector<double>>();
            if (v.size() != 4)
                fail(ErrorKind::ConfigError, "field 'rayleigh.samples' rows must be [u1_re, u1_im, u2_re, u2_im]");
            samples.push_back(CVec2(cdouble(v[0], v[1]), cdouble(v[2], v[3])));
        }
        res["rayleigh"] = {{"h", h}, {"M", M}, {"x0", x0}, {"samples", *s}};
        const auto c = extract_coeffs_2d(med, q, samples, x0, h, M);
        json out;
        out["config"] = res;
        out["coefficients"] = coeffs_json(c, M);
        emit(a, out.dump(2) + "\n");
        return 0;
    }
    if (a.action == "eval") {
        const json* cs = find(cfg, "rayleigh.coefficients");
        const json* ps = find(cfg, "rayleigh.points");
        if (!cs || !cs->is_array())
            fail(ErrorKind::ConfigError, "missing field 'rayleigh.coefficients'");
        if (!ps || !ps->is_array())
            fail(ErrorKind::ConfigError, "missing field 'rayleigh.points'");
        std::vector<std::tuple<int, cdouble, cdouble>> amps;
        for (const auto& t : *cs) {
            const auto up = opt_val<std::vector<double>>(t, "up", {0, 0}), us = opt_val<std::vector<double>>(t, "us", {0, 0});
            if (!t.contains("m") || up.size() != 2 || us.size() != 2)
                fail(ErrorKind::ConfigError, "field 'rayleigh.coefficients' entries need m, up[2], us[2]");
            amps.emplace_back(t["m"].get<int>(), cdouble(up[0], up[1]), cdouble(us[0], us[1]));
        }
        res["rayleigh"] = {{"coefficients", *cs}, {"points", *ps}};
        const auto c = make_coeffs_2d(med, q, amps);
        std::ostringstream os;
        os << "# config: " << res.dump() << "\n";
        os << "x1,x2,u1_re,u1_im,u2_re,u2_im\n";
        for (const auto& p : *ps) {
            const auto v = p.get<std::vector<double>>();
            if (v.size() != 2)
                fail(ErrorKind::ConfigError, "field 'rayleigh.points' rows must be [x1, x2]");
            const CVec2 u = eval_rayleigh_2d(c, Vec2(v[0], v[1]));
            os << num(v[0]) << "," << num(v[1]) << "," << num(u(0).real()) << "," << num(u(0).imag()) << ","
               << num(u(1).real()) << "," << num(u(1).imag()) << "\n";
        }
        emit(a, os.str());
        return 0;
    }
    fail(ErrorKind::ConfigError, "rayleigh action must be extract or eval");
}

// ---- phaseless ----

SourceConfig sources_of(const json& cfg, json& res)
{
    SourceConfig c;
    const std::string k = "phaseless.sources";
    c.z_fixed = vec2(cfg, k + ".z_fixed", c.z_fixed);
    c.q_fixed = vec2(cfg, k + ".q_fixed", c.q_fixed);
    c.arc_center = vec2(cfg, k + ".arc_center", c.arc_center);
    c.arc_ax = opt_val<double>(cfg, k + ".arc_ax", c.arc_ax);
    c.arc_ay = opt_val<double>(cfg, k + ".arc_ay", c.arc_ay);
    c.arc_t0 = opt_val<double>(cfg, k + ".arc_t0", c.arc_t0);
    c.arc_t1 = opt_val<double>(cfg, k + ".arc_t1", c.arc_t1);
    c.n_movable = opt_val<int>(cfg, k + ".n_movable", c.n_movable);
    c.h = opt_val<double>(cfg, k + ".h", c.h);
    c.n_meas = opt_val<int>(cfg, k + ".n_meas", c.n_meas);
    auto vecs = [&](const std::string& key, std::vector<Vec2> def) {
        const json* v = find(cfg, k + "." + key);
        if (!v)
            return def;
        std::vector<Vec2> out;
        for (const auto& e : *v) {
            const auto d = e.get<std::vector<double>>();
            if (d.size() != 2)
                fail(ErrorKind::ConfigError, "field '" + k + "." + key + "' entries must have 2 entries");
            out.emplace_back(d[0], d[1]);
        }
        return out;
    };
    c.q_movable = vecs("q_movable", c.q_movable);
    c.probes = vecs("probes", c.probes);
    auto arr = [](const std::vector<Vec2>& v) {
        json a = json::array();
        for (const auto& e : v)
            a.push_back({e(0), e(1)});
        return a;
    };
    res["phaseless"]["sources"] = {{"z_fixed", {c.z_fixed(0), c.z_fixed(1)}},
                                   {"q_fixed", {c.q_fixed(0), c.q_fixed(1)}},
                                   {"arc_center", {c.arc_center(0), c.arc_center(1)}},
                                   {"arc_ax", c.arc_ax},
                                   {"arc_ay", c.arc_ay},
                                   {"arc_t0", c.arc_t0},
                                   {"arc_t1", c.arc_t1},
                                   {"n_movable", c.n_movable},
                                   {"q_movable", arr(c.q_movable)},
                                   {"probes", arr(c.probes)},
                                   {"h", c.h},
                                   {"n_meas", c.n_meas}};
    return c;
}

json dataset_json(const PhaselessDataset& d, double omega)
{
    return {{"omega", omega},
            {"K", d.K},
            {"L", d.L},
            {"J", d.J},
            {"M", d.M},
            {"h", d.h},
            {"x1", d.x1},
            {"dirichlet_condition", d.dirichlet_condition},
            {"r", d.r},
            {"s", d.s},
            {"sup", d.sup}};
}

PhaselessDataset dataset_from(const json& j)
{
    PhaselessDataset d;
    try {
        d.K = j.at("K");
        d.L = j.at("L");
        d.J = j.at("J");
        d.M = j.at("M");
        d.h = j.at("h");
        d.x1 = j.at("x1").get<std::vector<double>>();
        d.r = j.at("r").get<std::vector<double>>();
        d.s = j.at("s").get<std::vector<double>>();
        d.sup = j.at("sup").get<std::vector<double>>();
    } catch (const json::exception& e) {
        fail(ErrorKind::ConfigError, std::string("malformed dataset: ") + e.what());
    }
    if (d.r.size() != size_t(d.K) * d.M || d.s.size() != size_t(d.K) * d.L * d.J * d.M || d.sup.size() != d.s.size())
        fail(ErrorKind::GridMismatch, "dataset arrays do not match their dimensions");
    return d;
}

json load_json(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        fail(ErrorKind::ConfigError, "cannot read '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::ConfigError, "'" + path + "': " + e.what());
    }
}

int cmd_phaseless(const Args& a, const json& cfg)
{
    json res;
    res["geometry"] = "qp2d";
    if (a.action == "synth") {
        const auto med0 = medium_of(cfg, res);
        const auto q = momentum_of(cfg, "qp2d", res);
        const auto prof = profile_of(cfg, "profile", res);
        const auto src = sources_of(cfg, res);
        const int N = opt_val<int>(cfg, "phaseless.N", 64);
        const auto freqs = num_list(cfg, "phaseless.frequencies", {med0.omega});
        res["phaseless"]["N"] = N;
        res["phaseless"]["frequencies"] = freqs;
        json out;
        out["config"] = res;
        json sets = json::array();
        for (double om : freqs) {
            const auto med = make_medium(med0.lambda, med0.mu, med0.rho, om, med0.eta);
            sets.push_back(dataset_json(synth_phaseless(med, q, prof, src, N), om));
        }
        out["datasets"] = sets;
        emit(a, out.dump(2) + "\n");
        return 0;
    }
    if (a.action == "check") {
        const std::string pa = opt_val<std::string>(cfg, "phaseless.check.a", "");
        const std::string pb = opt_val<std::string>(cfg, "phaseless.check.b", pa);
        if (pa.empty())
            fail(ErrorKind::ConfigError, "missing field 'phaseless.check.a'");
        res["phaseless"]["check"] = {{"a", pa}, {"b", pb}};
        const json ja = load_json(pa), jb = load_json(pb);
        const auto& da = ja.at("datasets");
        const auto& db = jb.at("datasets");
        if (da.size() != db.size())
            fail(ErrorKind::GridMismatch, "dataset files hold different frequency lists");
        json out;
        out["config"] = res;
        json per = json::array();
        double worst_tri = 0.0;
        for (size_t f = 0; f < da.size(); ++f) {
            const auto A = dataset_from(da[f]), B = dataset_from(db[f]);
            for (int k = 0; k < A.K; ++k)
                for (int l = 0; l < A.L; ++l)
                    for (int j = 0; j < A.J; ++j)
                        for (int m = 0; m < A.M; ++m) {
                            const double r = A.r[A.ri(k, m)], s = A.s[A.si(k, l, j, m)], u = A.sup[A.si(k, l, j, m)];
                            worst_tri = std::max({worst_tri, std::abs(r - s) - u, u - (r + s)});
                        }
            json flags = json::array();
            for (const auto& fl : nonvanishing_probe(A))
                flags.push_back({{"k", fl.k}, {"l", fl.l}});
            per.push_back({{"omega", da[f].value("omega", 0.0)}, {"cosine_discrepancy", cosine_identity(A, B)}, {"zero_tracks", flags}});
        }
        out["per_frequency"] = per;
        out["triangle_excess"] = std::max(0.0, worst_tri);
        emit(a, out.dump(2) + "\n");
        return 0;
    }
    fail(ErrorKind::ConfigError, "phaseless action must be synth or check");
}

int exit_code(ErrorKind k)
{
    return k == ErrorKind::ConfigError ? 2 : 3;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quasi-periodic elastic Green tensors, Rayleigh expansions and grating scattering"};
    app.require_subcommand(1);
    Args a;
    auto common = [&](CLI::App* s) {
        s->add_option("--config", a.config, "JSON config file");
        s->add_option("--out", a.out, "output file (default stdout)");
        s->add_option("--geometry", a.geometry, "qp2d | qp3d | biqp3d");
        s->add_option("--threads", a.threads, "worker threads");
        s->add_option("--seed", a.seed, "seed for randomized suites");
    };
    auto* ev = app.add_subcommand("eval", "Green tensor on a grid");
    auto* ve = app.add_subcommand("verify", "property suite");
    auto* so = app.add_subcommand("solve2d", "rigid grating scattering");
    auto* ra = app.add_subcommand("rayleigh", "Rayleigh coefficients");
    auto* ph = app.add_subcommand("phaseless", "phaseless datasets");
    for (auto* s : {ev, ve, so, ra, ph})
        common(s);
    ve->add_option("--suite", a.suite, "quasiperiodicity | reciprocity | pde_residual | oracle | ode_jump | specfun");
    ra->add_option("action", a.action, "extract | eval")->required();
    ph->add_option("action", a.action, "synth | check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    a.cmd = app.get_subcommands().front()->get_name();

    try {
        json cfg = json::object();
        if (!a.config.empty()) {
            cfg = load_json(a.config);
            if (!cfg.is_object())
                fail(ErrorKind::ConfigError, "config root must be an object");
        } else if (a.cmd != "verify") {
            fail(ErrorKind::ConfigError, "--config is required");
        }
        if (a.threads < 1)
            fail(ErrorKind::ConfigError, "--threads must be >= 1");
        if (a.cmd == "eval")
            return cmd_eval(a, cfg);
        if (a.cmd == "verify")
            return cmd_verify(a, cfg);
        if (a.cmd == "solve2d")
            return cmd_solve2d(a, cfg);
        if (a.cmd == "rayleigh")
            return cmd_rayleigh(a, cfg);
        return cmd_phaseless(a, cfg);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
