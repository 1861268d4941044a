#include "bosonic/verify.hpp"

#include "bosonic/hardy.hpp"
#include "bosonic/kernels.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace bosonic {

void SuiteResult::check(bool cond, const std::string& what) {
    ++total;
    if (cond)
        ++passed;
    else
        failures.push_back(what);
}

std::string SuiteResult::summary() const {
    return std::string(ok() ? "PASS " : "FAIL ") + std::to_string(passed) + "/" + std::to_string(total);
}

namespace {

using Clock = std::chrono::steady_clock;

std::string cfg(int m, int k, int l) {
    return "m=" + std::to_string(m) + " k=" + std::to_string(k) + " l=" + std::to_string(l);
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

std::vector<int> ms(const SuiteOptions& o, std::vector<int> dflt) {
    if (o.m) return {*o.m};
    return dflt;
}

std::vector<int> ks(const SuiteOptions& o, int kmax) {
    if (o.k) return {*o.k};
    std::vector<int> out;
    for (int k = 0; k <= kmax; ++k) out.push_back(k);
    return out;
}

int maxdeg(const SuiteOptions& o, int dflt) { return o.maxdeg.value_or(dflt); }

template <typename F>
SuiteResult timed(const std::string& name, int criterion, const std::string& tol, F body) {
    SuiteResult r;
    r.name = name;
    r.criterion = criterion;
    r.tolerance = tol;
    const auto t0 = Clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

std::vector<double> unit(std::vector<double> p) {
    double n = 0;
    for (double c : p) n += c * c;
    for (auto& c : p) c /= std::sqrt(n);
    return p;
}

}  // namespace

SuiteResult verify_dimension(const SuiteOptions& opt) {
    return timed("dimension", 1, "exact; runtime < 60 s", [&](SuiteResult& r) {
        const auto t0 = Clock::now();
        for (int m : ms(opt, {3, 4, 5}))
            for (int k : ks(opt, 3))
                for (int l = 0; l <= maxdeg(opt, 4); ++l) {
                    const long got = static_cast<long>(bl_basis_shared(OperatorParams(m, k), l)->dim());
                    const long want = dim_hk(m, l) * dim_hk(m, k);
                    r.check(got == want, cfg(m, k, l) + ": dim " + std::to_string(got) + " != " + std::to_string(want));
                }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        r.check(secs < 60, "runtime " + num(secs) + " s");
        r.notes.push_back("runtime " + num(secs) + " s");
    });
}

SuiteResult verify_membership(const SuiteOptions& opt) {
    return timed("membership", 2, "exact", [&](SuiteResult& r) {
        for (int m : ms(opt, {3, 4, 5}))
            for (int k : ks(opt, 3))
                for (int l = 0; l <= maxdeg(opt, 4); ++l) {
                    OperatorParams prm(m, k);
                    int i = 0;
                    for (const auto& b : bl_basis_shared(prm, l)->vectors)
                        r.check(apply_Dk(b, prm).is_zero(), cfg(m, k, l) + " vector " + std::to_string(i++));
                }
    });
}

SuiteResult verify_fischer(const SuiteOptions& opt) {
    return timed("fischer", 3, "exact", [&](SuiteResult& r) {
        std::mt19937_64 rng(opt.seed);
        const int n = opt.samples.value_or(100);
        for (int m : ms(opt, {3, 4}))
            for (int k : ks(opt, 2))
                for (int l = 0; l <= maxdeg(opt, 4); ++l) {
                    OperatorParams prm(m, k);
                    int bad = 0, nonunique = 0;
                    for (int t = 0; t < n; ++t) {
                        const PolyXU f = random_plhk(prm, l, rng);
                        bool good = true;
                        try {
                            const auto fd = fischer_decompose(f, prm);
                            if (!fd.unique) ++nonunique;
                            good = fd.reconstruct() == f;
                            for (const auto& [j, fj] : fd.components) {
                                good = good && apply_Dk(fj, prm).is_zero();
                                good = good && (fj.is_zero() || fj.is_homogeneous(X, j));
                            }
                            const PolyXU P = dirichlet_solver(prm, l)->solve(f).P;
                            for (int j = l - 1; j >= 0; j -= 2) good = good && homogeneous_part(P, X, j).is_zero();
                        } catch (const std::exception&) {
                            good = false;
                        }
                        if (!good) ++bad;
                        ++r.total;
                        if (good) ++r.passed;
                    }
                    if (bad) r.failures.push_back(cfg(m, k, l) + ": " + std::to_string(bad) + " failed");
                    if (nonunique)
                        r.notes.push_back(cfg(m, k, l) + ": decomposition exists but is not unique (singular Dirichlet map)");
                }
    });
}

SuiteResult verify_orthogonality(const SuiteOptions& opt) {
    return timed("orthogonality", 4, "exact", [&](SuiteResult& r) {
        const int d = maxdeg(opt, 3);
        for (int m : ms(opt, {3, 4})) {
            std::vector<int> klist = opt.k ? std::vector<int>{*opt.k} : ks(opt, m == 3 ? 3 : 2);
            std::vector<std::pair<int, int>> spaces;
            for (int k : klist)
                for (int s = 0; s <= d; ++s) spaces.emplace_back(k, s);
            for (size_t a = 0; a < spaces.size(); ++a)
                for (size_t b = a + 1; b < spaces.size(); ++b) {
                    const auto [k1, s] = spaces[a];
                    const auto [k2, t] = spaces[b];
                    const auto& B1 = bl_basis_shared(OperatorParams(m, k1), s)->vectors;
                    const auto& B2 = bl_basis_shared(OperatorParams(m, k2), t)->vectors;
                    long nonzero = 0, count = 0;
                    for (const auto& f : B1)
                        for (const auto& g : B2) {
                            ++count;
                            if (!inner_ss(f, g).is_zero()) ++nonzero;
                        }
                    r.total += count;
                    r.passed += count - nonzero;
                    if (nonzero)
                        r.failures.push_back("m=" + std::to_string(m) + " (k,l)=(" + std::to_string(k1) + "," +
                                             std::to_string(s) + ") vs (" + std::to_string(k2) + "," +
                                             std::to_string(t) + "): " + std::to_string(nonzero) + "/" +
                                             std::to_string(count) + " pairs not orthogonal");
                }
        }
    });
}

SuiteResult verify_reproducing(const SuiteOptions& opt) {
    return timed("reproducing", 5, "exact", [&](SuiteResult& r) {
        for (int m : ms(opt, {3, 4}))
            for (int k : ks(opt, 2))
                for (int l = 0; l <= maxdeg(opt, 3); ++l) {
                    OperatorParams prm(m, k);
                    const auto J = jlk_kernel(prm, l);
                    int i = 0;
                    for (const auto& f : bl_basis_shared(prm, l)->vectors)
                        r.check(J->contract(f, Domain::Sphere) == f, cfg(m, k, l) + " vector " + std::to_string(i++));
                }
    });
}

SuiteResult verify_bergman(const SuiteOptions& opt) {
    return timed("bergman", 6, "exact", [&](SuiteResult& r) {
        std::mt19937_64 rng(opt.seed);
        const int n = opt.samples.value_or(100);
        for (int m : ms(opt, {3, 4}))
            for (int k : ks(opt, 2))
                for (int l = 0; l <= maxdeg(opt, 3); ++l) {
                    OperatorParams prm(m, k);
                    int bad = 0;
                    for (int t = 0; t < n; ++t) {
                        bool good;
                        try {
                            good = bergman_routes(random_plhk(prm, l, rng), prm).agree();
                        } catch (const std::exception&) {
                            good = false;
                        }
                        ++r.total;
                        if (good)
                            ++r.passed;
                        else
                            ++bad;
                    }
                    if (bad) r.failures.push_back(cfg(m, k, l) + ": routes differ on " + std::to_string(bad) + "/" + std::to_string(n));
                }
        if (opt.m && *opt.m != 3) return;
        if (opt.k && *opt.k != 1) return;
        OperatorParams p31(3, 1);
        const PolyXU f = norm_sq(3, X) * poly_var(3, U, 0);
        const PolyXU want = poly_var(3, U, 0) * ScaledRational(3, 5);
        std::string what = "bergman_project(|x|^2 u1) at m=3 k=1";
        try {
            r.check(bergman_project(f, p31).route_a == want, what + " != 3/5 u1");
        } catch (const std::exception& e) {
            r.check(false, what + ": " + e.what());
        }
        const auto routes = bergman_routes(f, p31);
        r.notes.push_back("route B gives " + to_expression(routes.route_b) + ", route A gives " + to_expression(routes.route_a));
    });
}

SuiteResult verify_poisson(const SuiteOptions& opt) {
    return timed("poisson", 7, "abs 1e-8 at 20 points; k = 0 calibration rel 1e-10", [&](SuiteResult& r) {
        std::mt19937_64 rng(opt.seed);
        // configurations where the Dirichlet map is invertible
        std::vector<std::array<int, 3>> configs = {{3, 0, 4}, {3, 1, 4}, {3, 2, 3}, {4, 0, 3}, {4, 1, 2}, {5, 1, 2}};
        const int npts = opt.samples.value_or(20);
        for (const auto& c : configs) {
            if (opt.m && *opt.m != c[0]) continue;
            if (opt.k && *opt.k != c[1]) continue;
            OperatorParams prm(c[0], c[1]);
            const int l = std::min(c[2], maxdeg(opt, c[2]));
            PoissonKernel K(*calibrated_spec(prm));
            PolyXU f(c[0]);
            for (int j = 0; j <= l; ++j) f += random_plhk(prm, j, rng);
            const auto sol = dirichlet_poly(f, prm);
            if (!dirichlet_solver(prm, l)->unique()) continue;
            const NumericPolyXU exact(sol.P);
            const auto samples = kernel_samples(c[0], 0.0, npts, opt.seed + 100);
            double worst = 0;
            for (int i = 0; i < npts; ++i) {
                std::vector<double> x = samples[i].zeta;
                const double rad = 0.05 + 0.85 * i / std::max(npts - 1, 1);
                for (auto& v : x) v *= rad;
                const double err = std::abs(poisson_integral_poly(f, K, x.data(), samples[i].v.data()) -
                                            exact({x.data(), samples[i].v.data()}));
                worst = std::max(worst, err);
                r.check(err < 1e-8, cfg(c[0], c[1], l) + " point " + std::to_string(i) + ": error " + num(err));
            }
            r.notes.push_back(cfg(c[0], c[1], l) + ": worst error " + num(worst));
        }
        for (int m : ms(opt, {3, 4, 5})) {
            const auto s = calibrate_cmk(OperatorParams(m, 0));
            const double rel = std::abs(s.c_half() * omega(m) - 1);
            r.check(rel < 1e-10, "m=" + std::to_string(m) + " k=0 calibration: relative error " + num(rel));
            r.notes.push_back("m=" + std::to_string(m) + " k=0: c/2 * omega = " + format_double(s.numeric));
        }
    });
}

SuiteResult verify_series(const SuiteOptions& opt) {
    return timed("series", 8, "monotone with 1e-12 slack; gap < 1e-6 at L = 8", [&](SuiteResult& r) {
        const int m = opt.m.value_or(3);
        const int L = maxdeg(opt, 8);
        const auto samples = kernel_samples(m, 0.3, opt.samples.value_or(200), opt.seed);
        for (int k : ks(opt, 1)) {
            OperatorParams prm(m, k);
            PoissonKernel K(*calibrated_spec(prm));
            std::vector<double> gaps;
            for (int l = 1; l <= L; ++l) gaps.push_back(poisson_series_gap(prm, K, l, samples));
            bool monotone = true;
            for (size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] <= gaps[i - 1] + 1e-12;
            std::string trace;
            for (double g : gaps) trace += " " + num(g);
            r.check(monotone, "m=" + std::to_string(m) + " k=" + std::to_string(k) + ": not monotone:" + trace);
            r.check(gaps.back() < 1e-6,
                    "m=" + std::to_string(m) + " k=" + std::to_string(k) + ": gap " + num(gaps.back()) + " at L=" + std::to_string(L));
            r.notes.push_back("m=" + std::to_string(m) + " k=" + std::to_string(k) + " gaps L=1.." + std::to_string(L) + ":" + trace);
        }
    });
}

SuiteResult verify_growth(const SuiteOptions& opt) {
    return timed("growth", 9, "slack 1e-9", [&](SuiteResult& r) {
        const int m = opt.m.value_or(3);
        struct Data {
            int k;
            PolyXU g;
            std::string name;
        };
        const PolyXU u1 = poly_var(m, U, 0), u3 = poly_var(m, U, 2), x1 = poly_var(m, X, 0);
        std::vector<Data> data = {{1, u1, "u1"}, {1, x1 * u1, "zeta1 u1"}, {2, u1 * u1 - u3 * u3, "u1^2 - u3^2"}};
        for (const auto& d : data) {
            if (opt.k && *opt.k != d.k) continue;
            OperatorParams prm(m, d.k);
            for (double p : std::vector<double>{1.0, 2.0, INFINITY}) {
                const auto rep = growth_report(d.g, prm, p);
                const std::string what = "g=" + d.name + " p=" + format_double(p);
                r.check(rep.violations == 0, what + ": " + std::to_string(rep.violations) + " grid violations");
                r.notes.push_back(what + ": max " + num(rep.max_value()) + " bound " + num(rep.bound));
            }
            std::vector<PointSample> pts;
            for (double rad : {0.0, 0.5, 0.9, 0.99}) {
                std::vector<double> x(m, 0.0), v(m, 0.0);
                x[0] = rad * 0.6;
                x[1] = rad * 0.8;
                v[0] = 1;
                pts.push_back({x, v});
            }
            for (double p : {1.0, 2.0}) {
                const auto pg = point_growth_check(d.g, prm, p, pts);
                r.check(pg.violations == 0, "pointwise g=" + d.name + " p=" + format_double(p));
            }
        }
        if (!opt.k || *opt.k == 1) {
            ProductMeasure mu;
            mu.m = m;
            mu.k = 1;
            mu.atoms.push_back({unit(std::vector<double>(m, 1.0)), 1.0});
            mu.h = u1;
            PoissonKernel K(*calibrated_spec(OperatorParams(m, 1)));
            const auto rep = growth_report(mu, K);
            r.check(rep.violations == 0, "measure delta x u1: " + std::to_string(rep.violations) + " grid violations");
            r.notes.push_back("measure delta x u1: " + rep.note);
        }
        for (int mm : ms(opt, {3, 4, 5})) {
            const double crit = static_cast<double>(mm) / (mm - 1);
            for (double p : std::vector<double>{1.0, crit - 0.05}) {
                bool accepted = true;
                try {
                    check_lp_exponent(mm, p);
                } catch (const std::invalid_argument&) {
                    accepted = false;
                }
                r.check(accepted, "m=" + std::to_string(mm) + " p=" + format_double(p) + " rejected");
            }
            for (double p : std::vector<double>{crit, crit + 0.1, 0.5}) {
                bool rejected = false;
                try {
                    check_lp_exponent(mm, p);
                } catch (const std::invalid_argument&) {
                    rejected = true;
                }
                r.check(rejected, "m=" + std::to_string(mm) + " p=" + format_double(p) + " accepted");
            }
        }
    });
}

SuiteResult verify_weak_star(const SuiteOptions& opt) {
    return timed("weakstar", 10, "strict decrease by more than 1e-6", [&](SuiteResult& r) {
        const int m = 3;
        auto atoms = [&](int k, const std::string& h, std::vector<Atom> a) {
            ProductMeasure mu;
            mu.m = m;
            mu.k = k;
            mu.atoms = std::move(a);
            mu.h = parse_expression(h, m);
            return mu;
        };
        auto density = [&](int k, const std::string& d, const std::string& h) {
            ProductMeasure mu;
            mu.m = m;
            mu.k = k;
            mu.density1 = parse_expression(d, m);
            mu.h = parse_expression(h, m);
            return mu;
        };
        struct Pair {
            std::string name;
            ProductMeasure mu;
            std::string g;
        };
        std::vector<Pair> pairs = {
            {"sigma x u1", density(1, "1", "u1"), "u1*(1 + x1^2)"},
            {"delta_e1 x u1", atoms(1, "u1", {{{1, 0, 0}, 1.0}}), "x1*u1"},
            {"delta_e1 (k=0)", atoms(0, "1", {{{1, 0, 0}, 1.0}}), "x1^2"},
            {"0.5 delta_e1 - 0.3 delta_e2 x u1", atoms(1, "u1", {{{1, 0, 0}, 0.5}, {{0, 1, 0}, -0.3}}), "x1*u1 + x2*u2"},
            {"(1 + x1) x (u1^2 - u3^2)", density(2, "1 + x1", "u1^2 - u3^2"), "(x1 + 1)*(u1^2 - u3^2)"},
        };
        for (const auto& pr : pairs) {
            if (opt.k && *opt.k != pr.mu.k) continue;
            PoissonKernel K(*calibrated_spec(OperatorParams(m, pr.mu.k)));
            const PolyXU g = parse_expression(pr.g, m);
            std::vector<double> gaps;
            for (double rad : {0.5, 0.9, 0.99}) gaps.push_back(weak_star_gap(pr.mu, g, rad, rad, K));
            std::string trace;
            for (double v : gaps) trace += " " + num(v);
            r.check(gaps[0] - gaps[1] > 1e-6 && gaps[1] - gaps[2] > 1e-6, pr.name + ": not decreasing:" + trace);
            r.notes.push_back(pr.name + " with g = " + pr.g + ":" + trace);
        }
    });
}

const std::vector<SuiteInfo>& suites() {
    static const std::vector<SuiteInfo> all = {
        {"dimension", 1, "dim B_l = dim H_l * dim H_k", verify_dimension},
        {"membership", 2, "D_k annihilates every null space basis vector", verify_membership},
        {"fischer", 3, "Fischer decompositions of random polynomials", verify_fischer},
        {"orthogonality", 4, "double sphere orthogonality of null spaces", verify_orthogonality},
        {"reproducing", 5, "J_{l,k} reproduces B_l", verify_reproducing},
        {"bergman", 6, "Bergman projection routes agree", verify_bergman},
        {"poisson", 7, "Poisson integrals match Dirichlet polynomials", verify_poisson},
        {"series", 8, "Poisson kernel series convergence", verify_series},
        {"growth", 9, "Hardy space growth bounds", verify_growth},
        {"weakstar", 10, "weak* convergence of Poisson integrals", verify_weak_star},
    };
    return all;
}

const SuiteInfo* find_suite(const std::string& name) {
    for (const auto& s : suites())
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace bosonic
