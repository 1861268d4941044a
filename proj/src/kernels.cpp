#include "bosonic/kernels.hpp"

#include "bosonic/cache.hpp"

#include <map>
#include <stdexcept>
#include <tuple>

namespace bosonic {

namespace {

using Key = PolyXU::Key;
using FineMask = std::pair<unsigned, unsigned>;

FineMask fine_mask(const int* key, int m) { return {parity_mask(key, m), parity_mask(key + m, m)}; }

unsigned combined_mask(const Key& key, int m) {
    unsigned mask = 0;
    for (int i = 0; i < m; ++i)
        if ((key[i] + key[m + i]) & 1) mask |= 1u << i;
    return mask;
}

mpq_class pair_moment(const int* a, const int* b, int m, Domain domain) {
    std::vector<int> x(m), u(m);
    for (int i = 0; i < m; ++i) {
        x[i] = a[i] + b[i];
        u[i] = a[m + i] + b[m + i];
    }
    mpq_class mx = moment_ratio(x, m, domain);
    if (sgn(mx) == 0) return mx;
    return mx * moment_ratio(u, m, domain);
}

/**
 * Basis vectors of one parity class written as rows over the monomials
 * they use, with the Gram block of the class.
 */
struct ClassGram {
    std::vector<int> index;
    std::vector<Key> monos;
    QMatrix coords;
    QMatrix gram;
};

std::vector<ClassGram> class_grams(const SubspaceBasis& basis, Domain domain) {
    const int m = basis.m;
    std::map<unsigned, ClassGram> classes;
    for (size_t i = 0; i < basis.vectors.size(); ++i) {
        const auto& v = basis.vectors[i];
        if (v.is_zero()) throw std::logic_error("zero basis vector");
        classes[combined_mask(v.terms().begin()->first, m)].index.push_back(static_cast<int>(i));
    }
    std::vector<ClassGram> out;
    for (auto& [mask, cg] : classes) {
        std::map<Key, int, PolyXU::KeyLess> pos;
        for (int i : cg.index)
            for (const auto& [key, c] : basis.vectors[i].terms()) {
                if (c.omega_pow() != 0) throw std::logic_error("basis coefficients must be rational");
                if (combined_mask(key, m) != mask) throw std::logic_error("basis vector mixes parity classes");
                pos.emplace(key, 0);
            }
        int n = 0;
        for (auto& [key, p] : pos) {
            p = n++;
            cg.monos.push_back(key);
        }
        const int nb = static_cast<int>(cg.index.size());
        cg.coords.assign(nb, QVector(n));
        for (int r = 0; r < nb; ++r)
            for (const auto& [key, c] : basis.vectors[cg.index[r]].terms()) cg.coords[r][pos.at(key)] = c.value();

        std::map<FineMask, std::vector<int>> fine;
        for (int p = 0; p < n; ++p) fine[fine_mask(cg.monos[p].data(), m)].push_back(p);
        cg.gram.assign(nb, QVector(nb));
        for (const auto& [fm, ps] : fine) {
            const size_t s = ps.size();
            QMatrix mm(s, QVector(s));
            for (size_t a = 0; a < s; ++a)
                for (size_t b = a; b < s; ++b)
                    mm[a][b] = mm[b][a] = pair_moment(cg.monos[ps[a]].data(), cg.monos[ps[b]].data(), m, domain);
            // coords restricted to these monomials, times the moment block
            QMatrix cm(nb, QVector(s));
            for (int r = 0; r < nb; ++r)
                for (size_t b = 0; b < s; ++b) {
                    mpq_class acc = 0;
                    for (size_t a = 0; a < s; ++a) {
                        const mpq_class& c = cg.coords[r][ps[a]];
                        if (sgn(c) != 0 && sgn(mm[a][b]) != 0) acc += c * mm[a][b];
                    }
                    cm[r][b] = acc;
                }
            for (int r = 0; r < nb; ++r)
                for (int t = r; t < nb; ++t) {
                    mpq_class acc = 0;
                    for (size_t b = 0; b < s; ++b) {
                        const mpq_class& c = cg.coords[t][ps[b]];
                        if (sgn(c) != 0 && sgn(cm[r][b]) != 0) acc += cm[r][b] * c;
                    }
                    if (sgn(acc) != 0) {
                        cg.gram[r][t] += acc;
                        if (t != r) cg.gram[t][r] += acc;
                    }
                }
        }
        out.push_back(std::move(cg));
    }
    return out;
}

Key join(const int* a, const int* b, int m) {
    Key k(2 * m);
    std::copy(a, a + m, k.begin());
    std::copy(b, b + m, k.begin() + m);
    return k;
}

}  // namespace

ScaledRational moment(const MultiIndex& alpha, int m, Domain domain) {
    return ScaledRational(moment_ratio(alpha, m, domain), 1);
}

ScaledRational inner(const PolyXU& f, const PolyXU& g, Domain domain) {
    if (f.dim() != g.dim()) throw std::invalid_argument("dimension mismatch");
    const int m = f.dim();
    std::map<FineMask, std::vector<std::pair<const Key*, const ScaledRational*>>> buckets;
    for (const auto& [key, c] : g.terms()) buckets[fine_mask(key.data(), m)].push_back({&key, &c});
    ScaledRational sum;
    for (const auto& [key, c] : f.terms()) {
        auto it = buckets.find(fine_mask(key.data(), m));
        if (it == buckets.end()) continue;
        for (const auto& [gk, gc] : it->second) {
            mpq_class mo = pair_moment(key.data(), gk->data(), m, domain);
            if (sgn(mo) != 0) sum += c * *gc * ScaledRational(mo, 2);
        }
    }
    return sum;
}

ScaledRational inner_ss(const PolyXU& f, const PolyXU& g) { return inner(f, g, Domain::Sphere); }
ScaledRational inner_bb(const PolyXU& f, const PolyXU& g) { return inner(f, g, Domain::Ball); }

bool Gram::symmetric() const {
    for (size_t i = 0; i < entries.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (entries[i][j] != entries[j][i]) return false;
    return true;
}

bool Gram::positive_definite() const {
    QMatrix q(entries.size(), QVector(entries.size()));
    for (size_t i = 0; i < entries.size(); ++i)
        for (size_t j = 0; j < entries.size(); ++j) q[i][j] = entries[i][j].value();
    return leading_minors_positive(q);
}

Gram gram(std::shared_ptr<const SubspaceBasis> basis, InnerTag tag) {
    Gram g;
    const size_t n = basis->dim();
    g.entries.assign(n, std::vector<ScaledRational>(n));
    for (const auto& cg : class_grams(*basis, tag == InnerTag::SS ? Domain::Sphere : Domain::Ball))
        for (size_t r = 0; r < cg.index.size(); ++r)
            for (size_t t = 0; t < cg.index.size(); ++t)
                g.entries[cg.index[r]][cg.index[t]] = ScaledRational(cg.gram[r][t], 2);
    g.basis = std::move(basis);
    g.tag = tag;
    return g;
}

Kernel4::Kernel4(int m, int k, int l, Kind kind, Poly4 poly)
    : m_(m), k_(k), l_(l), kind_(kind), poly_(std::move(poly)) {
    if (poly_.dim() != m) throw std::invalid_argument("kernel dimension mismatch");
    std::map<Key, PolyXU, PolyXU::KeyLess> groups;
    for (const auto& [key, c] : poly_.terms()) {
        const int* z = key.data();
        Key zu = join(z, z + 2 * m, m);
        auto it = groups.try_emplace(zu, PolyXU(m)).first;
        it->second.add_term(join(z + m, z + 3 * m, m), c);
    }
    for (auto& [zu, xv] : groups) {
        auto [xm, um] = fine_mask(zu.data(), m);
        groups_.push_back({zu, xm, um, std::move(xv)});
    }
    numeric_ = std::make_shared<const NumericPoly<4>>(poly_);
}

PolyXU Kernel4::contract(const PolyXU& f, Domain domain) const {
    if (f.dim() != m_) throw std::invalid_argument("dimension mismatch");
    std::map<FineMask, std::vector<std::pair<const Key*, const ScaledRational*>>> buckets;
    for (const auto& [key, c] : f.terms()) buckets[fine_mask(key.data(), m_)].push_back({&key, &c});
    PolyXU out(m_);
    for (const auto& g : groups_) {
        auto it = buckets.find({g.xmask, g.umask});
        if (it == buckets.end()) continue;
        ScaledRational w;
        for (const auto& [fk, fc] : it->second) {
            mpq_class mo = pair_moment(g.zu.data(), fk->data(), m_, domain);
            if (sgn(mo) != 0) w += *fc * ScaledRational(mo, 2);
        }
        if (!w.is_zero()) out += g.xv * w;
    }
    return out;
}

ScaledRational Kernel4::trace() const {
    ScaledRational sum;
    const int m = m_;
    for (const auto& [key, c] : poly_.terms()) {
        std::vector<int> x(m), u(m);
        for (int i = 0; i < m; ++i) {
            x[i] = key[i] + key[m + i];
            u[i] = key[2 * m + i] + key[3 * m + i];
        }
        mpq_class mo = moment_ratio(x, m, Domain::Sphere);
        if (sgn(mo) == 0) continue;
        mo *= moment_ratio(u, m, Domain::Sphere);
        if (sgn(mo) != 0) sum += c * ScaledRational(mo, 2);
    }
    return sum;
}

bool Kernel4::symmetric() const { return poly_.permute_blocks({1, 0, 3, 2}) == poly_; }

double Kernel4::evaluate(const double* zeta, const double* x, const double* u, const double* v) const {
    return (*numeric_)({zeta, x, u, v});
}

Kernel4 Kernel4::operator+(const Kernel4& o) const {
    if (m_ != o.m_ || k_ != o.k_) throw std::invalid_argument("kernel parameters differ");
    return Kernel4(m_, k_, std::max(l_, o.l_), kind_ == o.kind_ ? kind_ : Kind::Custom, poly_ + o.poly_);
}

Kernel4 Kernel4::operator*(const ScaledRational& s) const { return Kernel4(m_, k_, l_, kind_, poly_ * s); }

std::string kind_name(Kernel4::Kind kind) {
    switch (kind) {
        case Kernel4::Kind::Reproducing: return "reproducing";
        case Kernel4::Kind::Bergman: return "bergman";
        case Kernel4::Kind::Custom: break;
    }
    return "custom";
}

json to_json(const Kernel4& k) {
    json j;
    j["m"] = k.m();
    j["k"] = k.k();
    j["l"] = k.l();
    j["kind"] = kind_name(k.kind());
    j["poly"] = to_json(k.poly());
    return j;
}

Kernel4 kernel4_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    Kernel4::Kind kd = Kernel4::Kind::Custom;
    if (kind == "reproducing") kd = Kernel4::Kind::Reproducing;
    else if (kind == "bergman") kd = Kernel4::Kind::Bergman;
    else if (kind != "custom") throw std::invalid_argument("unknown kernel kind " + kind);
    return Kernel4(j.at("m").get<int>(), j.at("k").get<int>(), j.at("l").get<int>(), kd,
                   poly4_from_json(j.at("poly")));
}

std::shared_ptr<const Kernel4> jlk_kernel(const OperatorParams& params, int l) {
    static Memo<std::tuple<int, int, int>, Kernel4> memo;
    return memo.get({params.m, params.k, l}, [&] {
        const int m = params.m;
        auto basis = bl_basis_shared(params, l);
        Poly4 poly(m);
        for (const auto& cg : class_grams(*basis, Domain::Sphere)) {
            QMatrix ginv = inverse(cg.gram);
            const size_t nb = cg.index.size(), n = cg.monos.size();
            // h = G^-1 B, then J = B^T h
            QMatrix h(nb, QVector(n));
            for (size_t i = 0; i < nb; ++i)
                for (size_t j = 0; j < nb; ++j) {
                    if (sgn(ginv[i][j]) == 0) continue;
                    for (size_t q = 0; q < n; ++q)
                        if (sgn(cg.coords[j][q]) != 0) h[i][q] += ginv[i][j] * cg.coords[j][q];
                }
            for (size_t p = 0; p < n; ++p)
                for (size_t q = 0; q < n; ++q) {
                    mpq_class acc = 0;
                    for (size_t i = 0; i < nb; ++i)
                        if (sgn(cg.coords[i][p]) != 0 && sgn(h[i][q]) != 0) acc += cg.coords[i][p] * h[i][q];
                    if (sgn(acc) == 0) continue;
                    const Key& xv = cg.monos[p];
                    const Key& zu = cg.monos[q];
                    Poly4::Key key(4 * m);
                    for (int t = 0; t < m; ++t) {
                        key[Zeta * m + t] = zu[t];
                        key[X4 * m + t] = xv[t];
                        key[U4 * m + t] = zu[m + t];
                        key[V4 * m + t] = xv[m + t];
                    }
                    poly.add_term(key, ScaledRational(acc, -2));
                }
        }
        return Kernel4(m, params.k, l, Kernel4::Kind::Reproducing, std::move(poly));
    });
}

HkValued project_Bl(const PolyXU& f, const OperatorParams& params, int l) {
    if (f.dim() != params.m) throw std::invalid_argument("dimension mismatch");
    return HkValued::make(jlk_kernel(params, l)->contract(f, Domain::Sphere), params.k);
}

BergmanRoutes bergman_routes(const PolyXU& f, const OperatorParams& params) {
    if (f.is_zero()) throw std::invalid_argument("zero input has no degree");
    const int m = params.m, k = params.k;
    const int s = f.degree(X);
    if (!f.is_homogeneous(X, s)) throw std::invalid_argument("input is not x-homogeneous");
    require_hk_valued(f, k);
    BergmanRoutes r{PolyXU(m), PolyXU(m)};
    for (int l = 0; l <= s; ++l)
        r.route_a += jlk_kernel(params, l)->contract(f, Domain::Ball) * ScaledRational((m + 2 * l) * (m + 2 * k));
    for (const auto& [j, fj] : fischer_decompose(f, params).components)
        r.route_b += fj * ScaledRational(m + 2 * j, m + j + s);
    return r;
}

BergmanRoutes bergman_project(const PolyXU& f, const OperatorParams& params) {
    BergmanRoutes r = bergman_routes(f, params);
    if (!r.agree()) throw std::logic_error("Bergman projection routes disagree");
    return r;
}

Kernel4 bergman_kernel_truncated(const OperatorParams& params, int L) {
    if (L < 0) throw std::invalid_argument("truncation must be non-negative");
    const int m = params.m, k = params.k;
    Poly4 sum(m);
    for (int l = 0; l <= L; ++l) sum += jlk_kernel(params, l)->poly() * ScaledRational((m + 2 * l) * (m + 2 * k));
    return Kernel4(m, k, L, Kernel4::Kind::Bergman, std::move(sum));
}

}  // namespace bosonic
