#pragma once

#include "modlat/poly.hpp"

#include <memory>

namespace modlat {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Element of K_R = R^{r1} x C^{r2}.
struct KRElement {
  std::vector<Real> re;
  std::vector<Cx> cx;

  KRElement() {}
  KRElement(size_t r1, size_t r2) : re(r1, Real(0)), cx(r2, Cx(Real(0))) {}

  KRElement operator*(const KRElement& o) const {
    KRElement r = *this;
    for (size_t i = 0; i < re.size(); ++i) r.re[i] *= o.re[i];
    for (size_t i = 0; i < cx.size(); ++i) r.cx[i] = r.cx[i] * o.cx[i];
    return r;
  }
  KRElement operator+(const KRElement& o) const {
    KRElement r = *this;
    for (size_t i = 0; i < re.size(); ++i) r.re[i] += o.re[i];
    for (size_t i = 0; i < cx.size(); ++i) r.cx[i] += o.cx[i];
    return r;
  }
  KRElement operator*(const Real& s) const {
    KRElement r = *this;
    for (auto& x : r.re) x *= s;
    for (auto& z : r.cx) z = z * s;
    return r;
  }
  KRElement inv() const {
    KRElement r = *this;
    for (auto& x : r.re) x = 1 / x;
    for (auto& z : r.cx) z = z.inv();
    return r;
  }
  // Canonical norm^2: sum over real places + twice over complex places.
  Real norm2() const {
    Real s = 0;
    for (const auto& x : re) s += x * x;
    for (const auto& z : cx) s += 2 * z.norm2();
    return s;
  }
  Real norm() const { return sqrt(norm2()); }
  Real sup_norm() const {
    Real m = 0;
    for (const auto& x : re) m = std::max(m, abs(x));
    for (const auto& z : cx) m = std::max(m, z.abs());
    return m;
  }
  // |N_{K_R/R}(x)| = prod |x_rho| * prod |x_sigma|^2.
  Real abs_field_norm() const {
    Real p = 1;
    for (const auto& x : re) p *= abs(x);
    for (const auto& z : cx) p *= z.norm2();
    return p;
  }
  // Minkowski coordinates: complex places contribute (sqrt2*Re, sqrt2*Im) so
  // the ambient Euclidean norm equals the canonical norm.
  std::vector<Real> coords() const {
    std::vector<Real> v;
    v.reserve(re.size() + 2 * cx.size());
    Real s2 = sqrt(Real(2));
    for (const auto& x : re) v.push_back(x);
    for (const auto& z : cx) {
      v.push_back(s2 * z.re);
      v.push_back(s2 * z.im);
    }
    return v;
  }
};

struct FieldElem {
  const NumberField* K = nullptr;
  std::vector<mpq_class> c;  // coordinates in the integral basis

  FieldElem() {}
  FieldElem(const NumberField* k, std::vector<mpq_class> cc) : K(k), c(std::move(cc)) {}

  bool is_zero() const {
    for (const auto& x : c)
      if (x != 0) return false;
    return true;
  }
  bool operator==(const FieldElem& o) const { return K == o.K && c == o.c; }
  bool operator<(const FieldElem& o) const { return c < o.c; }
};

// Fractional ideal in scaled integer HNF form: the Z-module (1/denom) * cols(hnf).
struct Ideal {
  mpz_class denom = 1;
  MatZ hnf;  // d x d, canonical column HNF, upper triangular

  bool operator==(const Ideal& o) const { return denom == o.denom && hnf == o.hnf; }
  bool operator<(const Ideal& o) const {
    if (denom != o.denom) return denom < o.denom;
    for (size_t i = 0; i < hnf.rows(); ++i)
      for (size_t j = 0; j < hnf.cols(); ++j)
        if (hnf(i, j) != o.hnf(i, j)) return hnf(i, j) < o.hnf(i, j);
    return false;
  }

  mpq_class norm() const {
    mpz_class det = 1;
    for (size_t i = 0; i < hnf.rows(); ++i) det *= hnf(i, i);
    mpz_class dpow;
    mpz_pow_ui(dpow.get_mpz_t(), denom.get_mpz_t(), hnf.rows());
    return mpq_class(det) / mpq_class(dpow);
  }

  long size_bits() const {
    long s = bit_size(denom);
    for (size_t i = 0; i < hnf.rows(); ++i)
      for (size_t j = 0; j < hnf.cols(); ++j) s += bit_size(hnf(i, j));
    return s;
  }
};

struct PrimeIdeal {
  mpz_class p;
  int residue_degree = 1;
  int ramification = 1;
  FieldElem second_gen;  // prime = (p, second_gen)
  Ideal ideal;

  mpz_class norm() const {
    mpz_class n;
    mpz_pow_ui(n.get_mpz_t(), p.get_mpz_t(), residue_degree);
    return n;
  }
};

// Class-group data for planner use; shipped with built-in fields.
struct ClassData {
  mpz_class h = 1;
  mpz_class w = 2;
  // Regulator at the current working precision.
  std::function<Real()> regulator = [] { return Real(1); };
};

class NumberField : public std::enable_shared_from_this<NumberField> {
 public:
  PolyQ f;              // monic integer defining polynomial
  int d = 1;            // degree
  int r1 = 1, r2 = 0;   // signature
  MatQ basis_mat;       // column j = coords of beta_j in the power basis
  MatQ power_to_beta;   // inverse of basis_mat
  mpz_class disc = 1;   // field discriminant
  mpz_class index = 1;  // [Z_K : Z[theta]]
  std::vector<MatQ> mult_rows;  // mult_rows[i](k,j): beta-coords of beta_i*beta_j
  unsigned embed_prec = 128;
  bool is_cyclotomic = false;
  bool basis_size_warning = false;
  std::optional<MatQ> conj_mat;  // complex conjugation on beta-coords, if an automorphism
  std::optional<ClassData> class_data;
  std::string name;  // registry name when built-in

  // Embeddings of the basis elements, at embed_prec + guard bits.
  std::vector<KRElement> beta_embeddings;

  // --- element constructors -------------------------------------------------

  FieldElem zero() const { return FieldElem(this, std::vector<mpq_class>(d, mpq_class(0))); }
  FieldElem one() const {
    auto e = zero();
    // beta-coords of 1 = power_to_beta * e_0.
    for (int i = 0; i < d; ++i) e.c[i] = power_to_beta(i, 0);
    return e;
  }
  FieldElem from_rational(const mpq_class& q) const {
    auto e = one();
    for (auto& x : e.c) x *= q;
    return e;
  }
  FieldElem elem(std::vector<mpq_class> coords) const {
    assert(static_cast<int>(coords.size()) == d);
    return FieldElem(this, std::move(coords));
  }
  // Element given by a polynomial in theta, reduced modulo f if needed.
  FieldElem from_power_coords(const std::vector<mpq_class>& pc) const {
    std::vector<mpq_class> full(d, mpq_class(0));
    if (pc.size() > static_cast<size_t>(d)) {
      PolyQ g{std::vector<mpq_class>(pc)};
      PolyQ r = poly_divmod(g, f).second;
      for (int i = 0; i <= r.deg(); ++i) full[i] = r.c[i];
    } else {
      for (size_t i = 0; i < pc.size(); ++i) full[i] = pc[i];
    }
    return FieldElem(this, power_to_beta * full);
  }

  // --- arithmetic -----------------------------------------------------------

  FieldElem add(const FieldElem& a, const FieldElem& b) const {
    FieldElem r = a;
    for (int i = 0; i < d; ++i) r.c[i] += b.c[i];
    return r;
  }
  FieldElem sub(const FieldElem& a, const FieldElem& b) const {
    FieldElem r = a;
    for (int i = 0; i < d; ++i) r.c[i] -= b.c[i];
    return r;
  }
  FieldElem neg(const FieldElem& a) const {
    FieldElem r = a;
    for (auto& x : r.c) x = -x;
    return r;
  }
  FieldElem mul(const FieldElem& a, const FieldElem& b) const {
    FieldElem r = zero();
    for (int i = 0; i < d; ++i) {
      if (a.c[i] == 0) continue;
      for (int k = 0; k < d; ++k) {
        mpq_class s = 0;
        for (int j = 0; j < d; ++j) {
          if (b.c[j] == 0) continue;
          s += mult_rows[i](k, j) * b.c[j];
        }
        r.c[k] += a.c[i] * s;
      }
    }
    return r;
  }
  FieldElem mul_scalar(const FieldElem& a, const mpq_class& q) const {
    FieldElem r = a;
    for (auto& x : r.c) x *= q;
    return r;
  }

  // Matrix of multiplication by a on beta-coordinates.
  MatQ mul_matrix(const FieldElem& a) const {
    MatQ m(d, d, mpq_class(0));
    for (int i = 0; i < d; ++i)
      if (a.c[i] != 0)
        for (int k = 0; k < d; ++k)
          for (int j = 0; j < d; ++j) m(k, j) += a.c[i] * mult_rows[i](k, j);
    return m;
  }

  FieldElem inverse(const FieldElem& a) const {
    if (a.is_zero()) throw std::domain_error("division by zero field element");
    MatQ m = mul_matrix(a);
    std::vector<mpq_class> e1 = one().c;
    return FieldElem(this, solve_q(m, e1));
  }
  FieldElem div(const FieldElem& a, const FieldElem& b) const { return mul(a, inverse(b)); }

  mpq_class field_norm(const FieldElem& a) const { return det_q(mul_matrix(a)); }
  mpq_class field_trace(const FieldElem& a) const {
    MatQ m = mul_matrix(a);
    mpq_class t = 0;
    for (int i = 0; i < d; ++i) t += m(i, i);
    return t;
  }

  FieldElem conjugate(const FieldElem& a) const {
    if (!conj_mat) throw std::logic_error("field has no stored complex conjugation");
    return FieldElem(this, (*conj_mat) * a.c);
  }

  // Exact canonical inner product Tr(x * conj(y)); available when complex
  // conjugation is a field automorphism (totally real or CM).
  bool has_exact_gram() const { return conj_mat.has_value(); }
  mpq_class inner_exact(const FieldElem& a, const FieldElem& b) const {
    return field_trace(mul(a, conjugate(b)));
  }

  // --- embeddings -----------------------------------------------------------

  KRElement embed(const FieldElem& a) const {
    KRElement r(r1, r2);
    for (int j = 0; j < d; ++j) {
      if (a.c[j] == 0) continue;
      Real q = to_real(a.c[j]);
      for (int v = 0; v < r1; ++v) r.re[v] += q * beta_embeddings[j].re[v];
      for (int v = 0; v < r2; ++v) r.cx[v] += beta_embeddings[j].cx[v] * q;
    }
    return r;
  }

  Real canonical_norm(const FieldElem& a) const { return embed(a).norm(); }

  // --- ideals ---------------------------------------------------------------

  Ideal canonicalize_ideal(mpz_class denom, MatZ h) const {
    // Divide out gcd(denom, content).
    mpz_class g = denom;
    for (size_t i = 0; i < h.rows(); ++i)
      for (size_t j = 0; j < h.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), h(i, j).get_mpz_t());
    if (g > 1) {
      denom /= g;
      for (size_t i = 0; i < h.rows(); ++i)
        for (size_t j = 0; j < h.cols(); ++j) h(i, j) /= g;
    }
    Ideal I;
    I.denom = denom;
    I.hnf = std::move(h);
    return I;
  }

  // Ideal generated as a Z_K-module by the given elements.
  Ideal ideal_from_gens(const std::vector<FieldElem>& gens) const {
    std::vector<FieldElem> closure;
    for (const auto& g : gens) {
      if (g.is_zero()) continue;
      for (int k = 0; k < d; ++k) {
        FieldElem bk = zero();
        bk.c[k] = 1;
        closure.push_back(mul(g, bk));
      }
    }
    if (closure.empty()) throw ZeroIdeal();
    // Common denominator, stack columns, HNF.
    mpz_class m = 1;
    for (const auto& e : closure)
      for (const auto& q : e.c) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), q.get_den().get_mpz_t());
    MatZ a(d, closure.size());
    for (size_t j = 0; j < closure.size(); ++j)
      for (int i = 0; i < d; ++i) {
        mpq_class v = closure[j].c[i] * m;
        assert(v.get_den() == 1);
        a(i, j) = v.get_num();
      }
    auto h = col_hnf(a);
    if (h.h.cols() != static_cast<size_t>(d)) throw ZeroIdeal("generators do not span full rank");
    return canonicalize_ideal(m, h.h);
  }

  Ideal unit_ideal() const { return ideal_from_gens({one()}); }
  Ideal principal_ideal(const FieldElem& g) const { return ideal_from_gens({g}); }

  std::vector<FieldElem> ideal_basis(const Ideal& I) const {
    std::vector<FieldElem> b;
    for (int j = 0; j < d; ++j) {
      std::vector<mpq_class> c(d);
      for (int i = 0; i < d; ++i) c[i] = mpq_class(I.hnf(i, j)) / mpq_class(I.denom);
      b.push_back(FieldElem(this, std::move(c)));
    }
    return b;
  }

  Ideal ideal_mul(const Ideal& A, const Ideal& B) const {
    auto ba = ideal_basis(A), bb = ideal_basis(B);
    std::vector<FieldElem> prods;
    prods.reserve(ba.size() * bb.size());
    for (const auto& x : ba)
      for (const auto& y : bb) prods.push_back(mul(x, y));
    // Products of Z-bases already Z-span the product ideal.
    mpz_class m = 1;
    for (const auto& e : prods)
      for (const auto& q : e.c) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), q.get_den().get_mpz_t());
    MatZ a(d, prods.size());
    for (size_t j = 0; j < prods.size(); ++j)
      for (int i = 0; i < d; ++i) {
        mpq_class v = prods[j].c[i] * m;
        a(i, j) = v.get_num();
      }
    auto h = col_hnf(a);
    if (h.h.cols() != static_cast<size_t>(d)) throw ZeroIdeal("degenerate ideal product");
    return canonicalize_ideal(m, h.h);
  }

  Ideal ideal_add(const Ideal& A, const Ideal& B) const {
    mpz_class m;
    mpz_lcm(m.get_mpz_t(), A.denom.get_mpz_t(), B.denom.get_mpz_t());
    MatZ a(d, 2 * d);
    mpz_class sa = m / A.denom, sb = m / B.denom;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        a(i, j) = A.hnf(i, j) * sa;
        a(i, d + j) = B.hnf(i, j) * sb;
      }
    auto h = col_hnf(a);
    return canonicalize_ideal(m, h.h);
  }

  Ideal ideal_scale(const Ideal& A, const FieldElem& x) const {
    auto b = ideal_basis(A);
    std::vector<FieldElem> gens;
    for (const auto& e : b) gens.push_back(mul(e, x));
    // x*A is already a Z-module spanned by x*basis; closure not required.
    mpz_class m = 1;
    for (const auto& e : gens)
      for (const auto& q : e.c) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), q.get_den().get_mpz_t());
    MatZ a(d, gens.size());
    for (size_t j = 0; j < gens.size(); ++j)
      for (int i = 0; i < d; ++i) a(i, j) = mpq_class(gens[j].c[i] * m).get_num();
    auto h = col_hnf(a);
    if (h.h.cols() != static_cast<size_t>(d)) throw ZeroIdeal("scaling by zero");
    return canonicalize_ideal(m, h.h);
  }

  Ideal ideal_scale_rational(const Ideal& A, const mpq_class& q) const {
    if (q == 0) throw ZeroScalar();
    mpz_class num = abs(q.get_num()), den = q.get_den();
    MatZ h = A.hnf;
    for (size_t i = 0; i < h.rows(); ++i)
      for (size_t j = 0; j < h.cols(); ++j) h(i, j) *= num;
    return canonicalize_ideal(A.denom * den, std::move(h));
  }

  // Inverse of a fractional ideal.
  Ideal ideal_inverse(const Ideal& A) const {
    // Reduce to an integral ideal: A = (1/denom) A0.
    Ideal A0;
    A0.denom = 1;
    A0.hnf = A.hnf;
    mpq_class n0q = A0.norm();
    assert(n0q.get_den() == 1);
    mpz_class N = n0q.get_num();
    // J = {x in Z_K : x*A0 subseteq N*Z_K}; then A0^{-1} = J/N.
    auto gens = ideal_basis(A0);
    // Condition rows: for each generator g, Mul(g) * xi in N*Z^d.
    mpz_class m = 1;
    std::vector<MatQ> mats;
    for (const auto& g : gens) {
      MatQ mg = mul_matrix(g);
      mats.push_back(mg);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), mg(i, j).get_den().get_mpz_t());
    }
    size_t rows = gens.size() * d;
    MatZ big(rows, d + rows);
    mpz_class M = m * N;
    for (size_t t = 0; t < gens.size(); ++t)
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) big(t * d + i, j) = mpq_class(mats[t](i, j) * m).get_num();
        big(t * d + i, d + t * d + i) = -M;
      }
    MatZ ker = integer_kernel(big);
    // Project to the xi block and HNF.
    MatZ xi(d, ker.cols());
    for (int i = 0; i < d; ++i)
      for (size_t j = 0; j < ker.cols(); ++j) xi(i, j) = ker(i, j);
    auto h = col_hnf(xi);
    if (h.h.cols() != static_cast<size_t>(d)) throw ZeroIdeal("ideal inverse failed");
    Ideal J = canonicalize_ideal(N, h.h);  // J/N
    // Account for the original denominator: A^{-1} = denom * A0^{-1}.
    return ideal_scale_rational(J, mpq_class(A.denom));
  }

  bool ideal_contains(const Ideal& A, const FieldElem& x) const {
    // x in A  <=>  denom*x is an integer combination of hnf columns.
    std::vector<mpz_class> v(d);
    for (int i = 0; i < d; ++i) {
      mpq_class q = x.c[i] * A.denom;
      if (q.get_den() != 1) return false;
      v[i] = q.get_num();
    }
    // Back-substitution along the upper-triangular HNF.
    for (int c = d - 1; c >= 0; --c) {
      mpz_class piv = A.hnf(c, c);
      mpz_class q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v[c].get_mpz_t(), piv.get_mpz_t());
      if (r != 0) return false;
      for (int i = 0; i <= c; ++i) v[i] -= q * A.hnf(i, c);
    }
    for (int i = 0; i < d; ++i)
      if (v[i] != 0) return false;
    return true;
  }

  bool ideal_subset(const Ideal& A, const Ideal& B) const {
    for (const auto& g : ideal_basis(A))
      if (!ideal_contains(B, g)) return false;
    return true;
  }

  // Canonical representative of x modulo the Z-lattice of ideal A (HNF box).
  FieldElem reduce_mod_ideal(const FieldElem& x, const Ideal& A) const {
    std::vector<mpq_class> v = x.c;
    for (int c = d - 1; c >= 0; --c) {
      mpq_class piv = mpq_class(A.hnf(c, c)) / mpq_class(A.denom);
      mpq_class ratio = v[c] / piv;
      mpz_class q = floor_q(ratio);
      if (q != 0)
        for (int i = 0; i <= c; ++i) v[i] -= mpq_class(q) * mpq_class(A.hnf(i, c)) / mpq_class(A.denom);
    }
    return FieldElem(this, std::move(v));
  }

  // All representatives of A/B for B subseteq A, |A/B| = norm(B)/norm(A).
  // Returned as elements of A; box representatives, deterministic order.
  std::vector<FieldElem> quotient_reps(const Ideal& A, const Ideal& B) const {
    MatZ t = quotient_matrix(A, B);
    auto h = col_hnf(t).h;
    std::vector<std::vector<mpz_class>> boxes{{}};
    for (int i = 0; i < d; ++i) {
      std::vector<std::vector<mpz_class>> next;
      for (const auto& pre : boxes)
        for (mpz_class v = 0; v < h(i, i); ++v) {
          auto cp = pre;
          cp.push_back(v);
          next.push_back(cp);
        }
      boxes = std::move(next);
    }
    auto ab = ideal_basis(A);
    std::vector<FieldElem> reps;
    reps.reserve(boxes.size());
    for (const auto& box : boxes) {
      FieldElem e = zero();
      for (int i = 0; i < d; ++i) e = add(e, mul_scalar(ab[i], mpq_class(box[i])));
      reps.push_back(e);
    }
    return reps;
  }

  // Uniformly random box representative of A/B.
  FieldElem random_quotient_rep(const Ideal& A, const Ideal& B, Rng& rng) const {
    MatZ t = quotient_matrix(A, B);
    auto h = col_hnf(t).h;
    auto ab = ideal_basis(A);
    FieldElem e = zero();
    for (int i = 0; i < d; ++i) {
      mpz_class v = rng.below(mpz_class(h(i, i)));
      if (v != 0) e = add(e, mul_scalar(ab[i], mpq_class(v)));
    }
    return e;
  }

  // Integer matrix expressing the basis of B in the basis of A (B subseteq A).
  MatZ quotient_matrix(const Ideal& A, const Ideal& B) const {
    MatQ am = to_matq(A.hnf), bm = to_matq(B.hnf);
    for (size_t i = 0; i < am.rows(); ++i)
      for (size_t j = 0; j < am.cols(); ++j) {
        am(i, j) /= A.denom;
        bm(i, j) /= B.denom;
      }
    MatQ t = inverse_q(am) * bm;
    MatZ tz(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        assert(t(i, j).get_den() == 1);
        tz(i, j) = t(i, j).get_num();
      }
    return tz;
  }

  long elem_size_bits(const FieldElem& a) const {
    long s = 0;
    for (const auto& q : a.c) s += bit_size(q);
    return s;
  }

  // --- primes ---------------------------------------------------------------

  std::vector<PrimeIdeal> factor_rational_prime(const mpz_class& p) const;
  std::vector<PrimeIdeal> primes_up_to(const mpq_class& B) const;
};

// ---------------------------------------------------------------------------

inline FieldPtr field_new(PolyQ f, MatQ basis, unsigned embed_prec = 128) {
  for (const auto& q : f.c)
    if (q.get_den() != 1) throw ReducibleDefiningPolynomial("defining polynomial must be integral");
  if (f.deg() < 1 || f.lead() != 1)
    throw ReducibleDefiningPolynomial("defining polynomial must be monic of degree >= 1");
  if (!is_irreducible_monic(f)) throw ReducibleDefiningPolynomial();

  auto K = std::make_shared<NumberField>();
  K->f = f;
  K->d = f.deg();
  K->embed_prec = embed_prec;
  K->basis_mat = basis;
  if (basis.rows() != static_cast<size_t>(K->d) || basis.cols() != static_cast<size_t>(K->d))
    throw SingularBasisMatrix("basis must be d x d");
  if (det_q(basis) == 0) throw SingularBasisMatrix();
  K->power_to_beta = inverse_q(basis);

  // Discriminant of f, then of the basis lattice.
  mpq_class disc_f = poly_discriminant(f);
  mpq_class detb = det_q(basis);
  mpq_class discK = disc_f * detb * detb;
  if (discK.get_den() != 1) throw SingularBasisMatrix("basis discriminant not integral");
  K->disc = discK.get_num();
  mpq_class idx = 1 / abs(detb);
  if (idx.get_den() != 1) throw SingularBasisMatrix("power basis not contained in given order");
  K->index = idx.get_num();

  // Signature.
  K->r1 = count_real_roots(f);
  K->r2 = (K->d - K->r1) / 2;
  if (K->r1 + 2 * K->r2 != K->d) throw ReducibleDefiningPolynomial("inconsistent signature");

  // Multiplication table: beta_i * beta_j in beta-coordinates.
  // Work in the power basis modulo f.
  auto poly_of_col = [&](int j) {
    std::vector<mpq_class> c(K->d);
    for (int i = 0; i < K->d; ++i) c[i] = basis(i, j);
    return PolyQ(std::move(c));
  };
  K->mult_rows.assign(K->d, MatQ(K->d, K->d, mpq_class(0)));
  for (int i = 0; i < K->d; ++i)
    for (int j = 0; j < K->d; ++j) {
      PolyQ prod = poly_divmod(poly_mul(poly_of_col(i), poly_of_col(j)), f).second;
      std::vector<mpq_class> pc(K->d, mpq_class(0));
      for (int t = 0; t <= prod.deg(); ++t) pc[t] = prod.c[t];
      std::vector<mpq_class> bc = K->power_to_beta * pc;
      for (int k = 0; k < K->d; ++k) K->mult_rows[i](k, j) = bc[k];
    }

  // Multiplication table must define a ring containing 1: check integrality of
  // structure constants (an order) and associativity on a few random triples.
  for (int i = 0; i < K->d; ++i)
    for (int j = 0; j < K->d; ++j)
      for (int k = 0; k < K->d; ++k)
        if (K->mult_rows[i](k, j).get_den() != 1)
          throw SingularBasisMatrix("basis is not a ring (non-integral structure constants)");
  {
    Rng rng(0xa55a5aa5ULL);
    for (int trial = 0; trial < 8; ++trial) {
      auto rnd = [&] {
        std::vector<mpq_class> c(K->d);
        for (auto& x : c) x = mpq_class(static_cast<long>(rng.below(19)) - 9);
        return FieldElem(K.get(), std::move(c));
      };
      FieldElem a = rnd(), b = rnd(), c = rnd();
      FieldElem lhs = K->mul(K->mul(a, b), c);
      FieldElem rhs = K->mul(a, K->mul(b, c));
      if (!(lhs == rhs)) throw SingularBasisMatrix("multiplication table not associative");
    }
  }

  // Embeddings at embed_prec + guard.
  {
    ScopedPrecision prec(embed_prec + 64);
    auto roots = complex_roots(f);
    Real tol = ldexp(Real(1), -static_cast<int>(embed_prec) / 2);
    std::vector<Real> real_roots;
    std::vector<Cx> cx_roots;
    for (const auto& z : roots) {
      if (abs(z.im) < tol)
        real_roots.push_back(z.re);
      else if (z.im > 0)
        cx_roots.push_back(z);
    }
    if (static_cast<int>(real_roots.size()) != K->r1 ||
        static_cast<int>(cx_roots.size()) != K->r2)
      throw PrecisionExhausted("could not separate real and complex roots");
    std::sort(real_roots.begin(), real_roots.end());
    std::sort(cx_roots.begin(), cx_roots.end(), [](const Cx& a, const Cx& b) {
      if (a.re != b.re) return a.re < b.re;
      return a.im < b.im;
    });
    K->beta_embeddings.assign(K->d, KRElement(K->r1, K->r2));
    for (int j = 0; j < K->d; ++j) {
      PolyQ bj = poly_of_col(j);
      for (int v = 0; v < K->r1; ++v) K->beta_embeddings[j].re[v] = poly_eval_real(bj, real_roots[v]);
      for (int v = 0; v < K->r2; ++v) K->beta_embeddings[j].cx[v] = poly_eval_cx(bj, cx_roots[v]);
    }
    // Basis size check (warn only).
    Real bound = pow(Real(2), K->d) * pow(abs(to_real(K->disc)), Real(1) / K->d);
    for (int j = 0; j < K->d; ++j)
      if (K->beta_embeddings[j].norm() > bound) K->basis_size_warning = true;
  }

  return K;
}

// --- prime factorization ----------------------------------------------------

inline std::vector<PrimeIdeal> NumberField::factor_rational_prime(const mpz_class& p) const {
  std::vector<PrimeIdeal> out;
  if (d == 1) {
    PrimeIdeal P;
    P.p = p;
    P.residue_degree = 1;
    P.ramification = 1;
    P.second_gen = zero();
    P.ideal = principal_ideal(from_rational(mpq_class(p)));
    out.push_back(P);
    return out;
  }
  if (index % p == 0) {
    // Only the shipped quadratic rule is supported above index divisors.
    if (d == 2) {
      // Factorization governed by the Kronecker symbol of the field
      // discriminant; second generators found by certified search.
      mpz_class D = disc;
      int sym = mpz_kronecker(D.get_mpz_t(), p.get_mpz_t());
      if (sym == 1) {
        // split: two primes of norm p
        std::vector<FieldElem> gens_found;
        std::vector<Ideal> ideals_found;
        for (long a = 0; a < p && ideals_found.size() < 2; ++a)
          for (long b = 0; b < p && ideals_found.size() < 2; ++b) {
            if (a == 0 && b == 0) continue;
            FieldElem g = elem({mpq_class(a), mpq_class(b)});
            Ideal I = ideal_from_gens({from_rational(mpq_class(p)), g});
            if (I.norm() == p) {
              bool fresh = true;
              for (const auto& J : ideals_found)
                if (J == I) fresh = false;
              if (fresh) {
                ideals_found.push_back(I);
                gens_found.push_back(g);
              }
            }
          }
        if (ideals_found.size() != 2) throw IndexDivisorUnsupported("split search failed");
        for (size_t i = 0; i < 2; ++i) {
          PrimeIdeal P;
          P.p = p;
          P.residue_degree = 1;
          P.ramification = 1;
          P.second_gen = gens_found[i];
          P.ideal = ideals_found[i];
          out.push_back(P);
        }
      } else if (sym == -1) {
        PrimeIdeal P;
        P.p = p;
        P.residue_degree = 2;
        P.ramification = 1;
        P.second_gen = zero();
        P.ideal = principal_ideal(from_rational(mpq_class(p)));
        out.push_back(P);
      } else {
        // ramified
        bool found = false;
        for (long a = 0; a < p && !found; ++a)
          for (long b = 0; b < p && !found; ++b) {
            if (a == 0 && b == 0) continue;
            FieldElem g = elem({mpq_class(a), mpq_class(b)});
            Ideal I = ideal_from_gens({from_rational(mpq_class(p)), g});
            if (I.norm() == p && ideal_mul(I, I) == principal_ideal(from_rational(mpq_class(p)))) {
              PrimeIdeal P;
              P.p = p;
              P.residue_degree = 1;
              P.ramification = 2;
              P.second_gen = g;
              P.ideal = I;
              out.push_back(P);
              found = true;
            }
          }
        if (!found) throw IndexDivisorUnsupported("ramified search failed");
      }
      return out;
    }
    throw IndexDivisorUnsupported("p divides the index and no built-in rule applies");
  }
  // Dedekind: factor f mod p.
  if (p >= (mpz_class(1) << 31)) throw IndexDivisorUnsupported("prime too large");
  std::uint64_t pu = static_cast<std::uint64_t>(p.get_ui());
  auto factors = factor_mod_p(reduce_mod_p(f, pu));
  for (const auto& [g, e] : factors) {
    std::vector<mpq_class> lift(g.c.size());
    for (size_t i = 0; i < g.c.size(); ++i) lift[i] = mpq_class(static_cast<long>(g.c[i]));
    FieldElem gen = from_power_coords(lift);
    PrimeIdeal P;
    P.p = p;
    P.residue_degree = g.deg();
    P.ramification = e;
    P.second_gen = gen;
    P.ideal = ideal_from_gens({from_rational(mpq_class(p)), gen});
    assert(P.ideal.norm() == P.norm());
    out.push_back(P);
  }
  return out;
}

inline std::vector<PrimeIdeal> NumberField::primes_up_to(const mpq_class& B) const {
  if (B < 2) throw EmptyPrimeSet("bound below 2");
  std::vector<PrimeIdeal> out;
  mpz_class bound = floor_q(B);
  for (mpz_class p = 2; p <= bound; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
    for (auto& P : factor_rational_prime(p))
      if (P.norm() <= bound) out.push_back(std::move(P));
  }
  // Deterministic order: by (p, residue_degree, ramification, generator coords).
  std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.residue_degree != b.residue_degree) return a.residue_degree < b.residue_degree;
    if (a.ramification != b.ramification) return a.ramification < b.ramification;
    return a.second_gen.c < b.second_gen.c;
  });
  return out;
}

inline PrimeIdeal sample_prime(const NumberField& K, const mpq_class& B, Rng& rng) {
  auto ps = K.primes_up_to(B);
  if (ps.empty()) throw EmptyPrimeSet();
  return ps[rng.below(static_cast<std::uint64_t>(ps.size()))];
}

// ---------------------------------------------------------------------------
// Built-in fields

namespace fields {

inline PolyQ make_poly(std::vector<long> coeffs) {
  std::vector<mpq_class> c(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i];
  return PolyQ(std::move(c));
}

inline FieldPtr rationals(unsigned prec = 128) {
  auto K = field_new(make_poly({0, 1}), MatQ::identity(1), prec);
  auto M = std::const_pointer_cast<NumberField>(K);
  M->name = "rat";
  M->conj_mat = MatQ::identity(1);
  ClassData cd;
  cd.h = 1;
  cd.w = 2;
  cd.regulator = [] { return Real(1); };
  M->class_data = cd;
  return K;
}

inline FieldPtr gaussian(unsigned prec = 128) {
  auto K = field_new(make_poly({1, 0, 1}), MatQ::identity(2), prec);
  auto M = std::const_pointer_cast<NumberField>(K);
  M->name = "gauss";
  M->is_cyclotomic = true;
  MatQ conj(2, 2, mpq_class(0));
  conj(0, 0) = 1;
  conj(1, 1) = -1;  // i -> -i
  M->conj_mat = conj;
  ClassData cd;
  cd.h = 1;
  cd.w = 4;
  cd.regulator = [] { return Real(1); };
  M->class_data = cd;
  return K;
}

inline FieldPtr eisenstein(unsigned prec = 128) {
  auto K = field_new(make_poly({1, 1, 1}), MatQ::identity(2), prec);
  auto M = std::const_pointer_cast<NumberField>(K);
  M->name = "eisen";
  M->is_cyclotomic = true;
  // conj(zeta) = zeta^2 = -1 - zeta.
  MatQ conj(2, 2, mpq_class(0));
  conj(0, 0) = 1;
  conj(0, 1) = -1;
  conj(1, 1) = -1;
  M->conj_mat = conj;
  ClassData cd;
  cd.h = 1;
  cd.w = 6;
  cd.regulator = [] { return Real(1); };
  M->class_data = cd;
  return K;
}

inline FieldPtr zeta5(unsigned prec = 128) {
  auto K = field_new(make_poly({1, 1, 1, 1, 1}), MatQ::identity(4), prec);
  auto M = std::const_pointer_cast<NumberField>(K);
  M->name = "zeta5";
  M->is_cyclotomic = true;
  // conj(zeta) = zeta^4 = -1 - z - z^2 - z^3; conj(z^k) = z^{-k mod 5}.
  MatQ conj(4, 4, mpq_class(0));
  // basis 1, z, z^2, z^3; z^4 = -(1+z+z^2+z^3)
  conj(0, 0) = 1;
  for (int i = 0; i < 4; ++i) conj(i, 1) = -1;       // z -> z^4
  conj(3, 2) = 1;                                     // z^2 -> z^3
  conj(2, 3) = 1;                                     // z^3 -> z^2
  M->conj_mat = conj;
  ClassData cd;
  cd.h = 1;
  cd.w = 10;
  cd.regulator = [] {
    Real phi = (1 + sqrt(Real(5))) / 2;
    return 2 * log(phi);
  };
  M->class_data = cd;
  return K;
}

inline FieldPtr root5(unsigned prec = 128) {
  // Z[(1+sqrt5)/2]: basis {1, (1+sqrt5)/2} over power basis {1, sqrt5}.
  MatQ b(2, 2, mpq_class(0));
  b(0, 0) = 1;
  b(0, 1) = mpq_class(1, 2);
  b(1, 1) = mpq_class(1, 2);
  auto K = field_new(make_poly({-5, 0, 1}), b, prec);
  auto M = std::const_pointer_cast<NumberField>(K);
  M->name = "rt5";
  M->conj_mat = MatQ::identity(2);  // totally real
  ClassData cd;
  cd.h = 1;
  cd.w = 2;
  cd.regulator = [] {
    Real phi = (1 + sqrt(Real(5))) / 2;
    return log(phi);
  };
  M->class_data = cd;
  return K;
}

inline FieldPtr by_name(const std::string& name, unsigned prec = 128) {
  if (name == "rat") return rationals(prec);
  if (name == "gauss") return gaussian(prec);
  if (name == "eisen") return eisenstein(prec);
  if (name == "zeta5") return zeta5(prec);
  if (name == "rt5") return root5(prec);
  throw std::invalid_argument("unknown built-in field: " + name);
}

}  // namespace fields

}  // namespace modlat
