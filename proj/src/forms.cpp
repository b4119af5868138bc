#include "forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsl::forms {

using arith::checked_add;
using arith::checked_mul;

PowerSeries PowerSeries::add(const PowerSeries& o) const {
    PowerSeries r = zero(std::min(order(), o.order()));
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = checked_add(c[i], o.c[i]);
    return r;
}

PowerSeries PowerSeries::multiply(const PowerSeries& o) const {
    i64 T = std::min(order(), o.order());
    PowerSeries r = zero(T);
    for (i64 i = 0; i <= T; ++i) {
        if (c[size_t(i)] == 0) continue;
        for (i64 j = 0; i + j <= T; ++j) {
            if (o.c[size_t(j)] == 0) continue;
            r.c[size_t(i + j)] =
                checked_add(r.c[size_t(i + j)], checked_mul(c[size_t(i)], o.c[size_t(j)]));
        }
    }
    return r;
}

PowerSeries PowerSeries::pow(int e) const {
    if (e < 0) throw std::domain_error("PowerSeries::pow: negative exponent");
    PowerSeries r = one(order());
    PowerSeries base = *this;
    while (e) {
        if (e & 1) r = r.multiply(base);
        base = base.multiply(base);
        e >>= 1;
    }
    return r;
}

int EtaQuotient::weight_times_two() const {
    int s = 0;
    for (auto& [d, r] : factors) s += r;
    return s;
}

i64 EtaQuotient::exponent_sum() const {
    i64 s = 0;
    for (auto& [d, r] : factors) s += d * i64(r);
    return s;
}

namespace {

// Generalized pentagonal exponents g and signs for prod (1 - q^n) =
// sum_m (-1)^m q^{m(3m-1)/2}, restricted to g <= T.
std::vector<std::pair<i64, int>> pentagonal_terms(i64 T) {
    std::vector<std::pair<i64, int>> terms;
    terms.emplace_back(0, 1);
    for (i64 m = 1;; ++m) {
        i64 g1 = m * (3 * m - 1) / 2;
        i64 g2 = m * (3 * m + 1) / 2;
        int s = (m % 2 == 0) ? 1 : -1;
        if (g1 > T && g2 > T) break;
        if (g1 <= T) terms.emplace_back(g1, s);
        if (g2 <= T) terms.emplace_back(g2, s);
    }
    return terms;
}

// In-place multiply by prod_n (1 - q^{dn}), truncated.
void multiply_eta_factor(std::vector<i128>& c, i64 d) {
    i64 T = i64(c.size()) - 1;
    auto terms = pentagonal_terms(T / d);
    for (i64 n = T; n >= 0; --n) {
        i128 acc = 0;
        for (auto& [g, s] : terms) {
            i64 idx = n - d * g;
            if (idx < 0) break;  // terms are ascending in g
            acc = checked_add(acc, s > 0 ? c[size_t(idx)] : -c[size_t(idx)]);
        }
        c[size_t(n)] = acc;
    }
}

// In-place divide by prod_n (1 - q^{dn}).
void divide_eta_factor(std::vector<i128>& c, i64 d) {
    i64 T = i64(c.size()) - 1;
    auto terms = pentagonal_terms(T / d);
    for (i64 n = 0; n <= T; ++n) {
        i128 acc = c[size_t(n)];
        for (size_t t = 1; t < terms.size(); ++t) {
            auto [g, s] = terms[t];
            i64 idx = n - d * g;
            if (idx < 0) break;
            acc = checked_add(acc, s > 0 ? -c[size_t(idx)] : c[size_t(idx)]);
        }
        c[size_t(n)] = acc;
    }
}

}  // namespace

PowerSeries eta_expand(const EtaQuotient& quotient, i64 T) {
    if (T < 1) throw std::domain_error("eta_expand: T must be >= 1");
    i64 s = quotient.exponent_sum();
    if (s % 24 != 0)
        throw std::domain_error("eta_expand: leading exponent sum(d r_d)/24 is not integral");
    i64 shift = s / 24;
    if (shift < 0) throw std::domain_error("eta_expand: negative leading exponent");
    std::vector<i128> c(size_t(T) + 1, 0);
    if (shift <= T) c[size_t(shift)] = 1;
    for (auto& [d, r] : quotient.factors) {
        if (d < 1) throw std::domain_error("eta_expand: divisor must be positive");
        for (int i = 0; i < r; ++i) multiply_eta_factor(c, d);
        for (int i = 0; i < -r; ++i) divide_eta_factor(c, d);
    }
    PowerSeries out;
    out.c = std::move(c);
    return out;
}

NewformData::NewformData(std::string label, i64 level, int weight, DirichletCharacter chi,
                         std::vector<i128> raw_coefficients, std::string source)
    : label_(std::move(label)),
      level_(level),
      weight_(weight),
      chi_(chi),
      raw_(std::move(raw_coefficients)),
      source_(std::move(source)) {
    if (level_ < 1 || !arith::is_squarefree(level_))
        throw std::domain_error("newform: level must be a square-free positive integer");
    if (weight_ < 2) throw std::domain_error("newform: weight must be >= 2");
    if (raw_.empty() || raw_[0] != 1)
        throw HeckeRelationError(1, 1, "newform: a(1) must equal 1");
    lambda_.resize(raw_.size());
    for (size_t i = 0; i < raw_.size(); ++i)
        lambda_[i] = double(raw_[i]) / std::pow(double(i + 1), 0.5 * (weight_ - 1));
    validate();
}

i128 NewformData::raw(i64 n) const {
    if (n < 1 || n > i64(raw_.size()))
        throw std::out_of_range("newform: raw coefficient index out of table range");
    return raw_[size_t(n - 1)];
}

double NewformData::lambda(i64 n) const {
    if (n < 1 || n > i64(lambda_.size()))
        throw std::out_of_range("newform: eigenvalue index out of table range (n=" +
                                std::to_string(n) + ", T=" + std::to_string(lambda_.size()) + ")");
    return lambda_[size_t(n - 1)];
}

double NewformData::lambda_extended(i64 n) const {
    if (n >= 1 && n <= i64(lambda_.size())) return lambda_[size_t(n - 1)];
    auto f = arith::factorize(n);
    double out = 1.0;
    for (auto& [p, e] : f.primes) {
        if (p > i64(lambda_.size()))
            throw std::out_of_range("newform: eigenvalue table exhausted at p=" +
                                    std::to_string(p));
        double lp = lambda_[size_t(p - 1)];
        double chip = chi_.value(p);
        double lj_1 = 1.0, lj = lp;  // lambda(p^0), lambda(p^1)
        for (int j = 1; j < e; ++j) {
            double next = lp * lj - chip * lj_1;
            lj_1 = lj;
            lj = next;
        }
        out *= lj;
    }
    return out;
}

bool NewformData::has_atkin_lehner(i64 p) const {
    for (auto& s : al_)
        if (s.p == p) return true;
    return false;
}

int NewformData::atkin_lehner_sign(i64 p) const {
    for (auto& s : al_)
        if (s.p == p) return s.sign;
    throw std::runtime_error("newform " + label_ + ": Atkin-Lehner sign unavailable at p=" +
                             std::to_string(p));
}

int NewformData::atkin_lehner_product(i64 M2) const {
    int sign = 1;
    for (i64 p : arith::prime_divisors(M2)) sign *= atkin_lehner_sign(p);
    return sign;
}

void NewformData::set_atkin_lehner(i64 p, int sign, const std::string& provenance) {
    if (level_ % p != 0) throw std::domain_error("set_atkin_lehner: p must divide the level");
    if (sign != 1 && sign != -1) throw std::domain_error("set_atkin_lehner: sign must be +-1");
    for (auto& s : al_) {
        if (s.p == p) {
            s.sign = sign;
            s.provenance = provenance;
            return;
        }
    }
    al_.push_back({p, sign, provenance});
    std::sort(al_.begin(), al_.end(),
              [](const AtkinLehnerSign& a, const AtkinLehnerSign& b) { return a.p < b.p; });
}

void NewformData::validate() const {
    const i64 T = i64(raw_.size());
    if (T == 0) return;  // lambda-only derived forms are validated at the source
    // Coprime multiplicativity: split off the smallest prime-power part.
    std::vector<i64> spf(size_t(T) + 1, 0);
    for (i64 i = 2; i <= T; ++i) {
        if (spf[size_t(i)] == 0) {
            for (i64 j = i; j <= T; j += i) {
                if (spf[size_t(j)] == 0) spf[size_t(j)] = i;
            }
        }
    }
    for (i64 n = 2; n <= T; ++n) {
        i64 p = spf[size_t(n)];
        i64 pe = 1, m = n;
        while (m % p == 0) {
            m /= p;
            pe *= p;
        }
        if (m == 1) continue;
        if (raw_[size_t(n - 1)] != checked_mul(raw_[size_t(pe - 1)], raw_[size_t(m - 1)]))
            throw HeckeRelationError(pe, m,
                                     "newform " + label_ + ": multiplicativity fails at (" +
                                         std::to_string(pe) + ", " + std::to_string(m) + ")");
    }
    // Prime-power recurrence a(p^{j+1}) = a(p) a(p^j) - chi(p) p^{k-1} a(p^{j-1}).
    for (i64 p = 2; p * p <= T; ++p) {
        if (spf[size_t(p)] != p) continue;
        i128 pk1 = 1;
        for (int i = 0; i < weight_ - 1; ++i) pk1 = checked_mul(pk1, p);
        i128 chip = chi_.value(p);
        i64 pj = p;
        while (pj * p <= T) {
            i128 expect = checked_add(checked_mul(raw_[size_t(p - 1)], raw_[size_t(pj - 1)]),
                                      -checked_mul(chip, checked_mul(pk1, raw_[size_t(pj / p - 1)])));
            if (raw_[size_t(pj * p - 1)] != expect)
                throw HeckeRelationError(p, pj,
                                         "newform " + label_ + ": Hecke recurrence fails at p=" +
                                             std::to_string(p) + ", p^j=" + std::to_string(pj));
            pj *= p;
        }
    }
    // Deligne bound |lambda(n)| <= d(n), and |a(p)|^2 = p^{k-2} at p | M for
    // trivial nebentypus.
    std::vector<i64> dcnt(size_t(T) + 1, 0);
    for (i64 d = 1; d <= T; ++d)
        for (i64 j = d; j <= T; j += d) ++dcnt[size_t(j)];
    for (i64 n = 1; n <= T; ++n) {
        if (std::abs(lambda_[size_t(n - 1)]) > double(dcnt[size_t(n)]) + 1e-9)
            throw HeckeRelationError(n, n, "newform " + label_ +
                                               ": eigenvalue bound violated at n=" +
                                               std::to_string(n));
    }
    if (chi_.is_trivial()) {
        for (i64 p : arith::prime_divisors(level_)) {
            if (p > T) continue;
            i128 pk2 = 1;
            for (int i = 0; i < weight_ - 2; ++i) pk2 = checked_mul(pk2, p);
            if (checked_mul(raw_[size_t(p - 1)], raw_[size_t(p - 1)]) != pk2)
                throw HeckeRelationError(p, p, "newform " + label_ +
                                                   ": |a(p)|^2 != p^{k-2} at ramified p=" +
                                                   std::to_string(p));
        }
    }
}

NewformData newform_from_expansion(const PowerSeries& series, const std::string& label,
                                   i64 level, int weight, DirichletCharacter chi, i64 T,
                                   const std::string& source) {
    if (T < 1 || T > series.order())
        throw std::domain_error("newform_from_expansion: T out of series range");
    if (series.c[0] != 0)
        throw HeckeRelationError(0, 0, "newform_from_expansion: constant term must vanish");
    if (series.c[1] != 1)
        throw HeckeRelationError(1, 1, "newform_from_expansion: not normalized, a(1) != 1");
    std::vector<i128> raw(series.c.begin() + 1, series.c.begin() + 1 + T);
    return NewformData(label, level, weight, chi, std::move(raw), source);
}

NewformData voronoi_dual(const NewformData& g, i64 M2) {
    if (g.level() % M2 != 0)
        throw std::domain_error("voronoi_dual: M2 must divide the level");
    if (!arith::is_squarefree(g.level()))
        throw std::domain_error("voronoi_dual: level must be square-free");
    auto [chi1, chi2] = g.nebentypus().factor(M2);
    NewformData dual;
    dual.label_ = g.label() + "*";
    dual.level_ = g.level();
    dual.weight_ = g.weight();
    // chi* = chi1 * conj(chi2); for the real characters in scope this is
    // again real, and we carry it as chi1 when M2 spans the full conductor.
    dual.chi_ = g.nebentypus();
    dual.source_ = "derived";
    dual.al_ = g.atkin_lehner_table();
    i64 T = g.table_length();
    dual.lambda_.resize(size_t(T));
    for (i64 n = 1; n <= T; ++n) {
        // split n = n1 * n2 with n2 | M2^inf, (n1, M2) = 1
        i64 n2 = 1, n1 = n;
        for (i64 p : arith::prime_divisors(M2)) {
            while (n1 % p == 0) {
                n1 /= p;
                n2 *= p;
            }
        }
        double v = chi2.value(n1) * g.lambda(n1) * chi1.value(n2) * g.lambda(n2);
        dual.lambda_[size_t(n - 1)] = v;
    }
    return dual;
}

i64 EllipticCurve::discriminant() const {
    i64 b2 = a1 * a1 + 4 * a2;
    i64 b4 = 2 * a4 + a1 * a3;
    i64 b6 = a3 * a3 + 4 * a6;
    i64 b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

i64 EllipticCurve::ap(i64 p) const {
    if (p == 2) {
        // brute force over F_2 x F_2 on the affine model
        i64 count = 0;
        bool singular_seen = false;
        for (i64 x = 0; x < 2; ++x) {
            for (i64 y = 0; y < 2; ++y) {
                i64 lhs = (y * y + a1 * x * y + a3 * y) % 2;
                i64 rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                if (((lhs - rhs) % 2 + 2) % 2 == 0) {
                    // gradient check for the singular node
                    i64 fy = (2 * y + a1 * x + a3) % 2;
                    i64 fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % 2;
                    if (conductor == 2 && fy % 2 == 0 && fx % 2 == 0 && !singular_seen) {
                        singular_seen = true;
                        continue;
                    }
                    ++count;
                }
            }
        }
        if (conductor == 2) return 2 - 1 - count;
        return 2 + 1 - (count + 1);
    }
    // odd p: complete the square, g(x) = (2y + a1 x + a3)^2 = 4f(x) + (a1 x + a3)^2
    std::vector<int8_t> qr(size_t(p), -1);
    qr[0] = 0;
    for (i64 y = 1; y <= p / 2; ++y) qr[size_t(y * y % p)] = 1;
    auto mod = [&](i64 v) { return ((v % p) + p) % p; };
    i64 sum = 0;
    i64 singular_x = -1, singular_g = -1;
    if (conductor == p) {
        // locate the node: g(x) = 0 with g'(x) = 0
        for (i64 x = 0; x < p; ++x) {
            i64 f = mod(x * x % p * x + a2 * x * x + a4 * x + a6);
            i64 l = mod(a1 * x + a3);
            i64 g = mod(4 * f + l * l);
            i64 gp = mod(4 * (3 * x * x + 2 * a2 * x + a4) + 2 * l * a1);
            if (g == 0 && gp == 0) {
                singular_x = x;
                singular_g = 0;
                break;
            }
        }
    }
    i64 smooth_affine = 0;
    for (i64 x = 0; x < p; ++x) {
        i64 f = mod(x * x % p * x + a2 * x * x + a4 * x + a6);
        i64 l = mod(a1 * x + a3);
        i64 g = mod(4 * f + l * l);
        int s = qr[size_t(g)];
        if (conductor == p) {
            i64 pts = 1 + s;  // y-count for this x
            if (x == singular_x && singular_g == 0) pts -= 1;  // drop the node
            smooth_affine += pts;
        } else {
            sum += s;
        }
    }
    if (conductor == p) return p - 1 - smooth_affine;
    return -sum;
}

NewformData newform_from_curve(const EllipticCurve& E, const std::string& label, i64 T) {
    if (!arith::is_prime(u64(E.conductor)))
        throw std::domain_error("newform_from_curve: prime conductor expected");
    i64 disc = E.discriminant();
    i64 ad = disc < 0 ? -disc : disc;
    while (ad % E.conductor == 0) ad /= E.conductor;
    if (ad != 1)
        throw std::domain_error("newform_from_curve: discriminant is not a conductor power");
    std::vector<i128> a(size_t(T) + 1, 0);
    a[1] = 1;
    std::vector<i64> spf(size_t(T) + 1, 0);
    for (i64 i = 2; i <= T; ++i)
        if (spf[size_t(i)] == 0)
            for (i64 j = i; j <= T; j += i)
                if (spf[size_t(j)] == 0) spf[size_t(j)] = i;
    for (i64 n = 2; n <= T; ++n) {
        i64 p = spf[size_t(n)];
        i64 pe = 1, m = n;
        while (m % p == 0) {
            m /= p;
            pe *= p;
        }
        if (m > 1) {
            a[size_t(n)] = checked_mul(a[size_t(pe)], a[size_t(m)]);
        } else if (n == p) {
            a[size_t(n)] = E.ap(p);
        } else {
            // a(p^{j+1}) = a_p a(p^j) - [p != N] p a(p^{j-1})
            i128 t = checked_mul(a[size_t(p)], a[size_t(n / p)]);
            if (p != E.conductor) t = checked_add(t, -checked_mul(i128(p), a[size_t(n / p / p)]));
            a[size_t(n)] = t;
        }
    }
    std::vector<i128> raw(a.begin() + 1, a.end());
    return NewformData(label, E.conductor, 2, DirichletCharacter::trivial(E.conductor),
                       std::move(raw), "builtin");
}

namespace {

struct CatalogueItem {
    BuiltinEntry entry;
    EtaQuotient eta;        // empty factors => curve-backed
    EllipticCurve curve;
};

const std::vector<CatalogueItem>& catalogue_items() {
    static const std::vector<CatalogueItem> items = [] {
        std::vector<CatalogueItem> v;
        auto eta = [&](std::string label, std::vector<std::string> aliases, i64 level, int weight,
                       i64 D, std::vector<std::pair<i64, int>> factors) {
            CatalogueItem it;
            it.entry = {label, std::move(aliases), level, weight, D};
            it.eta.factors = std::move(factors);
            it.eta.level = level;
            v.push_back(std::move(it));
        };
        auto curve = [&](std::string label, i64 N, i64 a1, i64 a2, i64 a3, i64 a4, i64 a6) {
            CatalogueItem it;
            it.entry = {label, {}, N, 2, 0};
            it.curve = {a1, a2, a3, a4, a6, N};
            v.push_back(std::move(it));
        };
        eta("1.12.a.a", {"delta"}, 1, 12, 0, {{1, 24}});
        eta("2.8.a.a", {}, 2, 8, 0, {{1, 8}, {2, 8}});
        eta("3.6.a.a", {}, 3, 6, 0, {{1, 6}, {3, 6}});
        eta("5.4.a.a", {}, 5, 4, 0, {{1, 4}, {5, 4}});
        eta("6.4.a.a", {}, 6, 4, 0, {{1, 2}, {2, 2}, {3, 2}, {6, 2}});
        eta("7.3.b.a", {}, 7, 3, -7, {{1, 3}, {7, 3}});
        eta("11.2.a.a", {}, 11, 2, 0, {{1, 2}, {11, 2}});
        curve("17.2.a.a", 17, 1, -1, 1, -1, -14);
        curve("19.2.a.a", 19, 0, 1, 1, -9, -15);
        curve("37.2.a.a", 37, 0, 0, 1, -1, 0);
        curve("43.2.a.a", 43, 0, 1, 1, 0, 0);
        curve("53.2.a.a", 53, 1, -1, 1, 0, 0);
        curve("61.2.a.a", 61, 1, 0, 0, -2, 1);
        curve("67.2.a.a", 67, 0, 1, 1, -12, -21);
        return v;
    }();
    return items;
}

const CatalogueItem* find_item(const std::string& name) {
    for (auto& it : catalogue_items()) {
        if (it.entry.label == name) return &it;
        for (auto& a : it.entry.aliases)
            if (a == name) return &it;
    }
    return nullptr;
}

}  // namespace

const std::vector<BuiltinEntry>& builtin_catalogue() {
    static const std::vector<BuiltinEntry> entries = [] {
        std::vector<BuiltinEntry> v;
        for (auto& it : catalogue_items()) v.push_back(it.entry);
        return v;
    }();
    return entries;
}

bool is_builtin(const std::string& name) { return find_item(name) != nullptr; }

NewformData make_builtin(const std::string& name, i64 T) {
    const CatalogueItem* it = find_item(name);
    if (!it) throw std::domain_error("unknown built-in form: " + name);
    if (T <= 0) T = 100000;
    if (!it->eta.factors.empty()) {
        auto chi = it->entry.char_discriminant == 0
                       ? DirichletCharacter::trivial(it->entry.level)
                       : DirichletCharacter::kronecker_char(it->entry.char_discriminant);
        PowerSeries s = eta_expand(it->eta, T);
        return newform_from_expansion(s, it->entry.label, it->entry.level, it->entry.weight, chi,
                                      T, "builtin");
    }
    return newform_from_curve(it->curve, it->entry.label, T);
}

}  // namespace rsl::forms
