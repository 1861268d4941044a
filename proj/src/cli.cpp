#include "bosonic/cli.hpp"

#include "bosonic/hardy.hpp"
#include "bosonic/kernels.hpp"
#include "bosonic/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bosonic {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to a sibling temporary file, then renames it over the target.
void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

struct Common {
    int m = 3;
    int k = 0;
    std::string measure = "normalized";
    std::string format;
    std::string out;
    std::uint64_t seed = 1;

    void emit(std::ostream& os, const std::string& text) const {
        if (out.empty())
            os << text;
        else
            write_atomic(out, text);
    }
};

void add_mk(CLI::App* app, Common& c, bool k_required = true) {
    app->add_option("--m", c.m, "dimension (m >= 3)")->required()->check(CLI::Range(3, 12));
    auto* k = app->add_option("--k", c.k, "harmonic degree in u")->check(CLI::Range(0, 12));
    if (k_required) k->required();
}

void add_output(CLI::App* app, Common& c, const std::vector<std::string>& formats) {
    app->add_option("--out", c.out, "output file (written atomically)");
    app->add_option("--format", c.format, "output format, default " + formats.front())->check(CLI::IsMember(formats));
}

std::string poly_text(const PolyXU& p, const std::string& format) {
    if (format == "expr") return to_expression(p) + "\n";
    return to_json(p).dump(2) + "\n";
}

std::vector<double> parse_point(const std::vector<double>& v, int m, const char* name) {
    if (static_cast<int>(v.size()) != m)
        throw UsageError(std::string(name) + " needs " + std::to_string(m) + " comma separated coordinates");
    return v;
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return INFINITY;
    try {
        size_t pos = 0;
        const double p = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return p;
    } catch (const std::exception&) {
        throw UsageError("--p must be a number or inf");
    }
}

std::vector<double> parse_grid(const std::string& s) {
    if (s == "default") return default_radius_grid();
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("--grid must be 'default' or a comma separated list");
        }
    }
    for (double r : out)
        if (r < 0 || r > 0.99) throw UsageError("grid radii must lie in [0, 0.99]");
    if (out.empty()) throw UsageError("empty grid");
    return out;
}

// Reads a file or inline JSON; returns nullopt for anything else.
std::optional<json> try_json(const std::string& source) {
    std::ifstream in(source);
    if (in) {
        try {
            return json::parse(in);
        } catch (const json::parse_error&) {
            return std::nullopt;
        }
    }
    const auto a = source.find_first_not_of(" \t\n");
    if (a != std::string::npos && source[a] == '{') return json::parse(source);
    return std::nullopt;
}

bool is_measure(const json& j) { return j.contains("density2") || j.contains("atoms"); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bosonic Laplacian null solutions, kernels and Hardy space checks", "bosonic"};
    app.require_subcommand(1);
    Common c;
    std::string poly_src, data_src, measure_src, grid = "default", p_text = "2", method = "reduced", suite;
    int l = 0;
    bool has_l = false;
    std::vector<double> xs, vs;
    SuiteOptions sopt;
    int int_m = 0, int_k = 0, int_deg = 0, int_samples = 0;

    auto* basis = app.add_subcommand("basis", "H_k basis, or the null space B_l with --l");
    add_mk(basis, c);
    auto* basis_l = basis->add_option("--l", l, "degree in x")->check(CLI::Range(0, 12));
    add_output(basis, c, {"json"});

    auto* dim = app.add_subcommand("dim", "dimension of the null space B_l");
    add_mk(dim, c);
    dim->add_option("--l", l, "degree in x")->required()->check(CLI::Range(0, 12));

    auto* apply = app.add_subcommand("apply", "apply the operator D_k");
    add_mk(apply, c);
    apply->add_option("--poly", poly_src, "JSON file, inline JSON or expression")->required();
    add_output(apply, c, {"json", "expr"});

    auto* dirichlet = app.add_subcommand("dirichlet", "polynomial Dirichlet solution");
    add_mk(dirichlet, c);
    dirichlet->add_option("--poly", poly_src, "boundary data")->required();
    add_output(dirichlet, c, {"json", "expr"});

    auto* decompose = app.add_subcommand("decompose", "Fischer decomposition");
    add_mk(decompose, c);
    decompose->add_option("--poly", poly_src, "polynomial in P_l (x) H_k")->required();
    add_output(decompose, c, {"json", "expr"});

    auto* jlk = app.add_subcommand("jlk", "reproducing kernel J_{l,k}");
    add_mk(jlk, c);
    jlk->add_option("--l", l, "degree in x")->required()->check(CLI::Range(0, 12));
    add_output(jlk, c, {"json"});

    auto* bergman = app.add_subcommand("bergman-project", "Bergman projection by both routes");
    add_mk(bergman, c);
    bergman->add_option("--poly", poly_src, "polynomial in P_l (x) H_k")->required();
    add_output(bergman, c, {"json", "expr"});

    auto* peval = app.add_subcommand("poisson-eval", "Poisson integral at an interior point");
    add_mk(peval, c);
    auto* peval_poly = peval->add_option("--poly", poly_src, "boundary data g(zeta, u)");
    auto* peval_meas = peval->add_option("--measure", measure_src, "measure JSON");
    peval_poly->excludes(peval_meas);
    peval->add_option("--x", xs, "interior point")->required()->delimiter(',');
    peval->add_option("--v", vs, "direction")->required()->delimiter(',');
    peval->add_option("--method", method, "reduced or full")->check(CLI::IsMember({"reduced", "full"}));

    auto* calibrate = app.add_subcommand("calibrate", "calibrate the Poisson kernel constant");
    add_mk(calibrate, c);
    calibrate->add_option("--measure", c.measure, "display convention")->check(CLI::IsMember({"raw", "normalized"}));
    add_output(calibrate, c, {"json"});

    auto* growth = app.add_subcommand("hardy-growth", "slice norm growth report");
    add_mk(growth, c);
    growth->add_option("--p", p_text, "exponent (number or inf)");
    growth->add_option("--data", data_src, "boundary polynomial or measure JSON")->required();
    growth->add_option("--grid", grid, "'default' or comma separated radii");
    growth->add_option("--measure", c.measure, "display convention")->check(CLI::IsMember({"raw", "normalized"}));
    add_output(growth, c, {"csv", "json"});

    auto* verify = app.add_subcommand("verify", "run an invariant suite");
    std::vector<std::string> names{"all"};
    for (const auto& s : suites()) names.push_back(s.name);
    verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(names));
    auto* vm = verify->add_option("--m", int_m, "dimension")->check(CLI::Range(3, 12));
    auto* vk = verify->add_option("--k", int_k, "harmonic degree")->check(CLI::Range(0, 12));
    auto* vd = verify->add_option("--maxdeg", int_deg, "largest degree")->check(CLI::Range(0, 12));
    auto* vs_ = verify->add_option("--samples", int_samples, "random samples per configuration")->check(CLI::Range(1, 100000));
    verify->add_option("--seed", sopt.seed, "random seed");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    has_l = basis_l->count() > 0;

    try {
        if (*basis) {
            OperatorParams prm(c.m, c.k);
            json j;
            j["m"] = c.m;
            j["k"] = c.k;
            const SubspaceBasis b = has_l ? *bl_basis_shared(prm, l) : hk_basis(c.m, c.k);
            if (has_l) j["l"] = l;
            j["dim"] = b.dim();
            json list = json::array();
            for (const auto& v : b.vectors) list.push_back(to_json(v));
            j["basis"] = list;
            c.emit(out, j.dump(2) + "\n");
            return 0;
        }
        if (*dim) {
            OperatorParams prm(c.m, c.k);
            const size_t d = bl_basis_shared(prm, l)->dim();
            out << d << "\n";
            const long want = dim_hk(c.m, l) * dim_hk(c.m, c.k);
            if (static_cast<long>(d) != want)
                err << "note: dim H_l * dim H_k = " << want << " differs from the computed kernel dimension\n";
            return 0;
        }
        if (*apply) {
            c.emit(out, poly_text(apply_Dk(load_poly(poly_src, c.m), OperatorParams(c.m, c.k)), c.format));
            return 0;
        }
        if (*dirichlet) {
            OperatorParams prm(c.m, c.k);
            const PolyXU f = load_poly(poly_src, c.m);
            const auto sol = dirichlet_poly(f, prm);
            const bool unique = dirichlet_solver(prm, std::max(f.degree(X), 0))->unique();
            if (c.format == "expr") {
                c.emit(out, to_expression(sol.P) + "\n");
            } else {
                json j;
                j["unique"] = unique;
                j["g"] = to_json(sol.g);
                j["P"] = to_json(sol.P);
                c.emit(out, j.dump(2) + "\n");
            }
            if (!unique) err << "note: the Dirichlet map is singular here; one solution of a family is shown\n";
            return 0;
        }
        if (*decompose) {
            const auto fd = fischer_decompose(load_poly(poly_src, c.m), OperatorParams(c.m, c.k));
            if (c.format == "expr") {
                std::string text;
                for (const auto& [j, fj] : fd.components) text += std::to_string(j) + ": " + to_expression(fj) + "\n";
                c.emit(out, text);
            } else {
                json j;
                j["l"] = fd.l;
                j["unique"] = fd.unique;
                json comps = json::array();
                for (const auto& [jj, fj] : fd.components) comps.push_back({{"j", jj}, {"poly", to_json(fj)}});
                j["components"] = comps;
                c.emit(out, j.dump(2) + "\n");
            }
            return 0;
        }
        if (*jlk) {
            c.emit(out, to_json(*jlk_kernel(OperatorParams(c.m, c.k), l)).dump(2) + "\n");
            return 0;
        }
        if (*bergman) {
            const auto r = bergman_routes(load_poly(poly_src, c.m), OperatorParams(c.m, c.k));
            if (c.format == "expr") {
                c.emit(out, "route_a: " + to_expression(r.route_a) + "\nroute_b: " + to_expression(r.route_b) + "\n");
            } else {
                json j;
                j["agree"] = r.agree();
                j["route_a"] = to_json(r.route_a);
                j["route_b"] = to_json(r.route_b);
                c.emit(out, j.dump(2) + "\n");
            }
            if (!r.agree()) {
                err << "routes disagree\n";
                return 1;
            }
            return 0;
        }
        if (*peval) {
            OperatorParams prm(c.m, c.k);
            const auto x = parse_point(xs, c.m, "--x");
            const auto v = parse_point(vs, c.m, "--v");
            PoissonKernel K(*calibrated_spec(prm));
            double val;
            if (!measure_src.empty()) {
                const auto j = try_json(measure_src);
                if (!j) throw UsageError("--measure must be a JSON file or inline JSON");
                val = poisson_integral(measure_from_json(*j, c.m, c.k), K, x.data(), v.data());
            } else if (!poly_src.empty()) {
                val = poisson_integral_poly(load_poly(poly_src, c.m), K, x.data(), v.data(),
                                            method == "full" ? PoissonMethod::Full : PoissonMethod::Reduced);
            } else {
                throw UsageError("poisson-eval needs --poly or --measure");
            }
            out << format_double(val) << "\n";
            return 0;
        }
        if (*calibrate) {
            const auto s = calibrate_cmk(OperatorParams(c.m, c.k));
            json j;
            j["m"] = c.m;
            j["k"] = c.k;
            j["c_mk"] = {{"num", s.c_mk.num().get_str()}, {"den", s.c_mk.den().get_str()}, {"omega", s.c_mk.omega_pow()}};
            j["measure"] = c.measure;
            j["c_half"] = format_double(c.measure == "raw" ? s.c_half() : s.c_half() * omega(c.m));
            j["fit"] = format_double(s.numeric);
            j["residual"] = format_double(s.residual);
            c.emit(out, j.dump(2) + "\n");
            return 0;
        }
        if (*growth) {
            OperatorParams prm(c.m, c.k);
            const double p = parse_p(p_text);
            const auto radii = parse_grid(grid);
            SliceNormReport rep;
            const auto j = try_json(data_src);
            if (j && is_measure(*j)) {
                if (p != 1) throw UsageError("measures are reported with p = 1");
                PoissonKernel K(*calibrated_spec(prm));
                rep = growth_report(measure_from_json(*j, c.m, c.k), K, radii);
            } else {
                rep = growth_report(load_poly(data_src, c.m), prm, p, radii);
            }
            if (c.measure == "raw" && !std::isinf(p)) {
                const double s = std::pow(omega(c.m), 2 / p);
                for (auto& v : rep.values) v *= s;
                rep.bound *= s;
                rep.reference *= s;
            }
            if (c.format != "json") {
                c.emit(out, to_csv(rep));
            } else {
                json r;
                r["p"] = std::isinf(p) ? json("inf") : json(p);
                r["constant"] = rep.constant;
                r["reference"] = rep.reference;
                r["bound"] = rep.bound;
                r["violations"] = rep.violations;
                r["monotone_checked"] = rep.monotone_checked;
                r["monotone_violations"] = rep.monotone_violations;
                r["note"] = rep.note;
                json rows = json::array();
                for (size_t i = 0; i < rep.values.size(); ++i)
                    rows.push_back({{"r1", rep.grid[i].first}, {"r2", rep.grid[i].second}, {"norm", rep.values[i]}, {"ok", static_cast<bool>(rep.ok[i])}});
                r["grid"] = rows;
                c.emit(out, r.dump(2) + "\n");
            }
            if (!rep.note.empty()) err << "note: " << rep.note << "\n";
            return rep.violations == 0 ? 0 : 1;
        }
        if (*verify) {
            if (vm->count()) sopt.m = int_m;
            if (vk->count()) sopt.k = int_k;
            if (vd->count()) sopt.maxdeg = int_deg;
            if (vs_->count()) sopt.samples = int_samples;
            bool all_ok = true;
            for (const auto& s : suites()) {
                if (suite != "all" && suite != s.name) continue;
                const auto r = s.run(sopt);
                all_ok = all_ok && r.ok();
                if (suite == "all")
                    out << s.name << " (criterion " << s.criterion << "): " << r.summary() << "\n";
                else
                    out << r.summary() << "\n";
                for (const auto& f : r.failures) out << "  fail: " << f << "\n";
            }
            return all_ok ? 0 : 1;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace bosonic
