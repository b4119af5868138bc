#pragma once

// Exact integer q-series, eta-quotient expansions, elliptic-curve
// coefficient tables, and the newform data model with normalized Hecke
// eigenvalues and Atkin-Lehner data.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"

namespace rsl::forms {

using arith::DirichletCharacter;
using arith::i128;
using arith::i64;

struct PowerSeries {
    // coefficients of q^0 .. q^T, exact integers
    std::vector<i128> c;

    i64 order() const { return i64(c.size()) - 1; }
    static PowerSeries zero(i64 T) {
        PowerSeries s;
        s.c.assign(size_t(T) + 1, 0);
        return s;
    }
    static PowerSeries one(i64 T) {
        PowerSeries s = zero(T);
        s.c[0] = 1;
        return s;
    }
    PowerSeries add(const PowerSeries& o) const;
    PowerSeries multiply(const PowerSeries& o) const;  // truncated to min order
    PowerSeries pow(int e) const;
};

struct EtaQuotient {
    std::vector<std::pair<i64, int>> factors;  // (divisor d, exponent r_d)
    i64 level = 1;

    int weight_times_two() const;
    i64 exponent_sum() const;  // sum d * r_d; must be 0 mod 24
};

// q^{sum(d r_d)/24} prod_n prod_d (1 - q^{dn})^{r_d} through q^T.
PowerSeries eta_expand(const EtaQuotient& quotient, i64 T);

struct HeckeRelationError : std::runtime_error {
    i64 m, n;
    HeckeRelationError(i64 m_, i64 n_, const std::string& what)
        : std::runtime_error(what), m(m_), n(n_) {}
};

struct AtkinLehnerSign {
    i64 p = 0;
    int sign = 0;  // +1 or -1
    std::string provenance;  // "derived", "user", ...
};

class NewformData {
  public:
    NewformData(std::string label, i64 level, int weight, DirichletCharacter chi,
                std::vector<i128> raw_coefficients, std::string source);

    const std::string& label() const { return label_; }
    i64 level() const { return level_; }
    int weight() const { return weight_; }
    const DirichletCharacter& nebentypus() const { return chi_; }
    const std::string& source() const { return source_; }
    i64 table_length() const { return i64(raw_.size()); }
    bool has_raw() const { return !raw_.empty(); }

    // a(n), exact; 1 <= n <= T.
    i128 raw(i64 n) const;
    // lambda(n) = a(n) / n^{(kappa-1)/2} from the table; 1 <= n <= T.
    double lambda(i64 n) const;
    // lambda(n) for any n >= 1, extending past the table by the Hecke
    // prime-power recurrence and multiplicativity. Throws when the table
    // lacks lambda(p) for some p | n.
    double lambda_extended(i64 n) const;

    bool has_atkin_lehner(i64 p) const;
    int atkin_lehner_sign(i64 p) const;  // throws when unavailable
    // Product of eta_g(p) over p | M2; eta_g(1) = 1.
    int atkin_lehner_product(i64 M2) const;
    void set_atkin_lehner(i64 p, int sign, const std::string& provenance);
    const std::vector<AtkinLehnerSign>& atkin_lehner_table() const { return al_; }

    bool self_dual() const { return chi_.is_real(); }

    // Validates the full table: a(1) = 1, coprime multiplicativity,
    // prime-power recurrence, the Deligne bound, and |a(p)|^2 = p^{kappa-2}
    // at p | M for trivial nebentypus. Throws HeckeRelationError.
    void validate() const;

  private:
    // lambda-table-only constructor for derived (dual) forms.
    NewformData() = default;
    friend NewformData voronoi_dual(const NewformData&, i64);

    std::string label_;
    i64 level_ = 1;
    int weight_ = 2;
    DirichletCharacter chi_ = DirichletCharacter::trivial(1);
    std::vector<i128> raw_;      // raw_[n-1] = a(n); empty for derived forms
    std::vector<double> lambda_;  // lambda_[n-1]
    std::vector<AtkinLehnerSign> al_;
    std::string source_;
};

// a(n) = series coefficient of q^n, normalized by n^{(kappa-1)/2}; the
// Hecke invariants are validated before the form becomes visible.
NewformData newform_from_expansion(const PowerSeries& series, const std::string& label,
                                   i64 level, int weight, DirichletCharacter chi, i64 T,
                                   const std::string& source = "user");

// Dual form g* at conductor part M2 | M:
//   lambda_{g*}(n) = conj(chi2)(n) lambda_g(n)     for (n, M2) = 1,
//   lambda_{g*}(n) = chi1(n) conj(lambda_g)(n)     for n | M2^inf,
// extended multiplicatively. Same level and weight.
NewformData voronoi_dual(const NewformData& g, i64 M2);

struct EllipticCurve {
    i64 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    i64 conductor = 0;  // prime conductor expected

    i64 discriminant() const;
    // a_p for any prime p (multiplicative reduction handled at p = conductor).
    i64 ap(i64 p) const;
};

// Weight-2 rational newform attached to a prime-conductor curve.
NewformData newform_from_curve(const EllipticCurve& E, const std::string& label, i64 T);

// Built-in catalogue.
struct BuiltinEntry {
    std::string label;
    std::vector<std::string> aliases;
    i64 level;
    int weight;
    i64 char_discriminant;  // 0 = trivial nebentypus
};

const std::vector<BuiltinEntry>& builtin_catalogue();
bool is_builtin(const std::string& name);
// T <= 0 selects the catalogue default (1e5).
NewformData make_builtin(const std::string& name, i64 T = 0);

}  // namespace rsl::forms
