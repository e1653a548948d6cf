#pragma once

#include "modlat/numfield.hpp"

namespace modlat {

// r x c matrix over K. All ops take the field explicitly.
struct MatK {
  const NumberField* K = nullptr;
  size_t r = 0, c = 0;
  std::vector<FieldElem> a;

  MatK() {}
  MatK(const NumberField* k, size_t rr, size_t cc) : K(k), r(rr), c(cc), a(rr * cc, k->zero()) {}

  static MatK identity(const NumberField* k, size_t n) {
    MatK m(k, n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = k->one();
    return m;
  }

  FieldElem& operator()(size_t i, size_t j) { return a[i * c + j]; }
  const FieldElem& operator()(size_t i, size_t j) const { return a[i * c + j]; }

  void swap_cols(size_t j, size_t k) {
    for (size_t i = 0; i < r; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }
  bool operator==(const MatK& o) const {
    if (r != o.r || c != o.c) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!(a[i] == o.a[i])) return false;
    return true;
  }
};

inline MatK matk_mul(const MatK& x, const MatK& y) {
  const NumberField* K = x.K;
  MatK z(K, x.r, y.c);
  for (size_t i = 0; i < x.r; ++i)
    for (size_t k = 0; k < x.c; ++k) {
      if (x(i, k).is_zero()) continue;
      for (size_t j = 0; j < y.c; ++j)
        z(i, j) = K->add(z(i, j), K->mul(x(i, k), y(k, j)));
    }
  return z;
}

inline FieldElem matk_det(const MatK& m0) {
  const NumberField* K = m0.K;
  MatK m = m0;
  size_t n = m.r;
  FieldElem det = K->one();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m(piv, c).is_zero()) ++piv;
    if (piv == n) return K->zero();
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = K->neg(det);
    }
    det = K->mul(det, m(c, c));
    FieldElem inv = K->inverse(m(c, c));
    for (size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      FieldElem f = K->mul(m(i, c), inv);
      for (size_t j = c; j < n; ++j) m(i, j) = K->sub(m(i, j), K->mul(f, m(c, j)));
    }
  }
  return det;
}

inline MatK matk_inverse(const MatK& m0) {
  const NumberField* K = m0.K;
  MatK m = m0;
  size_t n = m.r;
  MatK inv = MatK::identity(K, n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m(piv, c).is_zero()) ++piv;
    if (piv == n) throw RankDeficient("singular K-matrix");
    if (piv != c)
      for (size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    FieldElem dinv = K->inverse(m(c, c));
    for (size_t j = 0; j < n; ++j) {
      m(c, j) = K->mul(m(c, j), dinv);
      inv(c, j) = K->mul(inv(c, j), dinv);
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c).is_zero()) continue;
      FieldElem f = m(i, c);
      for (size_t j = 0; j < n; ++j) {
        m(i, j) = K->sub(m(i, j), K->mul(f, m(c, j)));
        inv(i, j) = K->sub(inv(i, j), K->mul(f, inv(c, j)));
      }
    }
  }
  return inv;
}

inline size_t matk_rank(const MatK& m0) {
  const NumberField* K = m0.K;
  MatK m = m0;
  size_t n = m.r, cols = m.c, rank = 0;
  for (size_t c = 0; c < cols && rank < n; ++c) {
    size_t piv = rank;
    while (piv < n && m(piv, c).is_zero()) ++piv;
    if (piv == n) continue;
    if (piv != rank)
      for (size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(rank, j));
    FieldElem dinv = K->inverse(m(rank, c));
    for (size_t i = rank + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      FieldElem f = K->mul(m(i, c), dinv);
      for (size_t j = c; j < cols; ++j) m(i, j) = K->sub(m(i, j), K->mul(f, m(rank, j)));
    }
    ++rank;
  }
  return rank;
}

// Pseudo-matrix: module generated by sum_j ideals[j] * (column j of mat).
struct PseudoMat {
  MatK mat;
  std::vector<Ideal> ideals;
};

// Rank-r module lattice over Z_K with an exact pseudo-basis.
struct ModuleLattice {
  FieldPtr field;
  size_t rank = 0;
  MatK basis;                 // r x r, full K-rank
  std::vector<Ideal> ideals;  // one per column

  const NumberField* K() const { return field.get(); }
  size_t ambient_dim() const { return rank * field->d; }

  long size_bits() const {
    long s = 0;
    for (size_t i = 0; i < rank; ++i)
      for (size_t j = 0; j < rank; ++j) s += field->elem_size_bits(basis(i, j));
    for (const auto& I : ideals) s += I.size_bits();
    return s;
  }

  // det(embedded lattice)^2, exact.
  mpq_class det_embedded_squared() const {
    mpq_class nb = field->field_norm(matk_det(basis));
    mpq_class p = nb * nb;
    for (const auto& I : ideals) {
      mpq_class ni = I.norm();
      p *= ni * ni;
    }
    mpz_class dr;
    mpz_pow_ui(dr.get_mpz_t(), mpz_class(abs(field->disc)).get_mpz_t(), rank);
    return p * dr;
  }
};

inline ModuleLattice free_module(const FieldPtr& K, size_t r) {
  ModuleLattice M;
  M.field = K;
  M.rank = r;
  M.basis = MatK::identity(K.get(), r);
  M.ideals.assign(r, K->unit_ideal());
  return M;
}

// ---------------------------------------------------------------------------
// Pseudo-HNF (module HNF over the Dedekind ring), canonical form.

namespace detail {

// x + y = 1 with x in A, y in B, for integral coprime ideals A + B = (1).
inline std::pair<FieldElem, FieldElem> idempotent_pair(const NumberField& K, const Ideal& A,
                                                       const Ideal& B) {
  int d = K.d;
  MatZ ab(d, 2 * d);
  assert(A.denom == 1 && B.denom == 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ab(i, j) = A.hnf(i, j);
      ab(i, d + j) = B.hnf(i, j);
    }
  std::vector<mpz_class> target(d);
  auto one = K.one();
  for (int i = 0; i < d; ++i) {
    assert(one.c[i].get_den() == 1);
    target[i] = one.c[i].get_num();
  }
  auto sol = solve_z(ab, target);
  if (!sol) throw RankDeficient("ideals not coprime in idempotent_pair");
  auto ba = K.ideal_basis(A);
  FieldElem x = K.zero();
  for (int j = 0; j < d; ++j) x = K.add(x, K.mul_scalar(ba[j], mpq_class((*sol)[j])));
  FieldElem y = K.sub(one, x);
  return {x, y};
}

}  // namespace detail

// Canonical pseudo-HNF of a pseudo-matrix of K-rank r (rows).
// Output: upper triangular with pivots scaled so each ideal is integral and
// primitive; entries right of a pivot reduced to canonical residues.
inline ModuleLattice pseudo_hnf(const FieldPtr& field, PseudoMat pm) {
  const NumberField& K = *field;
  MatK& H = pm.mat;
  std::vector<Ideal>& J = pm.ideals;
  size_t r = H.r, m = H.c;

  size_t found = 0;
  std::vector<size_t> pivot_rows;
  for (size_t ii = r; ii-- > 0 && found < m;) {
    // Find first active column with nonzero entry in row ii.
    size_t c0 = found;
    while (c0 < m && H(ii, c0).is_zero()) ++c0;
    if (c0 == m) continue;
    if (c0 != found) {
      H.swap_cols(c0, found);
      std::swap(J[c0], J[found]);
    }
    for (size_t c = found + 1; c < m; ++c) {
      if (H(ii, c).is_zero()) continue;
      FieldElem a = H(ii, found), b = H(ii, c);
      Ideal aI = K.ideal_scale(J[found], a);
      Ideal bI = K.ideal_scale(J[c], b);
      Ideal dsum = K.ideal_add(aI, bI);
      Ideal dinv = K.ideal_inverse(dsum);
      // Integral coprime parts.
      Ideal Ia = K.ideal_mul(aI, dinv);
      Ideal Ib = K.ideal_mul(bI, dinv);
      auto [x, y] = detail::idempotent_pair(K, Ia, Ib);
      FieldElem u = K.div(x, a);
      FieldElem v = K.div(y, b);
      // New columns: pivot column gets entry 1, other entry 0.
      Ideal newJf = dsum;
      Ideal newJc = K.ideal_mul(K.ideal_mul(J[found], J[c]), dinv);
      for (size_t i = 0; i < r; ++i) {
        FieldElem p = H(i, found), q = H(i, c);
        H(i, found) = K.add(K.mul(u, p), K.mul(v, q));
        H(i, c) = K.sub(K.mul(b, p), K.mul(a, q));
      }
      J[found] = newJf;
      J[c] = newJc;
    }
    // Normalize pivot to exactly 1 (it already is u*a+v*b = 1 when combines
    // happened; otherwise divide out).
    if (!(H(ii, found) == K.one())) {
      FieldElem h = H(ii, found);
      FieldElem hinv = K.inverse(h);
      for (size_t i = 0; i < r; ++i) H(i, found) = K.mul(H(i, found), hinv);
      J[found] = K.ideal_scale(J[found], h);
    }
    pivot_rows.push_back(ii);
    ++found;
  }
  if (found < r) throw RankDeficient("pseudo-matrix does not have full rank");

  // Keep pivot columns only, reorder by increasing pivot row.
  ModuleLattice M;
  M.field = field;
  M.rank = r;
  M.basis = MatK(&K, r, r);
  M.ideals.assign(r, K.unit_ideal());
  for (size_t c = 0; c < r; ++c) {
    size_t src = found - 1 - c;  // reversed
    for (size_t i = 0; i < r; ++i) M.basis(i, c) = H(i, src);
    M.ideals[c] = J[src];
  }
  // pivot of column c is row c (upper triangular with unit diagonal).

  // Reduce off-diagonal entries: process pivot columns bottom-up.
  for (size_t c = r; c-- > 0;) {
    for (size_t j = c + 1; j < r; ++j) {
      FieldElem e = M.basis(c, j);
      if (e.is_zero()) continue;
      Ideal red = K.ideal_mul(M.ideals[c], K.ideal_inverse(M.ideals[j]));
      FieldElem e2 = K.reduce_mod_ideal(e, red);
      FieldElem gamma = K.sub(e, e2);
      if (!gamma.is_zero())
        for (size_t i = 0; i <= c; ++i)
          M.basis(i, j) = K.sub(M.basis(i, j), K.mul(gamma, M.basis(i, c)));
    }
  }

  // Presentation: scale each column so its ideal is integral and primitive.
  for (size_t c = 0; c < r; ++c) {
    const Ideal& I = M.ideals[c];
    mpz_class content = 0;
    for (size_t i = 0; i < I.hnf.rows(); ++i)
      for (size_t j = 0; j < I.hnf.cols(); ++j)
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), I.hnf(i, j).get_mpz_t());
    mpq_class s = mpq_class(I.denom) / mpq_class(content);  // ideal *= s
    if (s != 1) {
      M.ideals[c] = K.ideal_scale_rational(I, s);
      mpq_class sinv = 1 / s;
      for (size_t i = 0; i < r; ++i) M.basis(i, c) = K.mul_scalar(M.basis(i, c), sinv);
    }
  }
  return M;
}

inline ModuleLattice pseudo_hnf(const ModuleLattice& M) {
  PseudoMat pm{M.basis, M.ideals};
  return pseudo_hnf(M.field, std::move(pm));
}

inline bool module_equal(const ModuleLattice& A, const ModuleLattice& B) {
  if (A.field.get() != B.field.get()) throw FieldMismatch();
  if (A.rank != B.rank) throw FieldMismatch("rank mismatch");
  ModuleLattice ha = pseudo_hnf(A), hb = pseudo_hnf(B);
  if (!(ha.basis == hb.basis)) return false;
  for (size_t i = 0; i < ha.ideals.size(); ++i)
    if (!(ha.ideals[i] == hb.ideals[i])) return false;
  return true;
}

// Membership of a K-vector in the module, via its canonical HNF.
inline bool module_contains(const ModuleLattice& Mhnf, const std::vector<FieldElem>& x) {
  const NumberField& K = *Mhnf.K();
  size_t r = Mhnf.rank;
  std::vector<FieldElem> v = x;
  for (size_t c = r; c-- > 0;) {
    // pivot at (c, c), unit scaled by presentation; solve coefficient.
    FieldElem piv = Mhnf.basis(c, c);
    FieldElem coef = K.div(v[c], piv);
    if (!K.ideal_contains(Mhnf.ideals[c], coef)) return false;
    for (size_t i = 0; i <= c; ++i) v[i] = K.sub(v[i], K.mul(coef, Mhnf.basis(i, c)));
  }
  for (const auto& e : v)
    if (!e.is_zero()) return false;
  return true;
}

// c * M for a nonzero rational or field element.
inline ModuleLattice scale(const ModuleLattice& M, const FieldElem& c) {
  if (c.is_zero()) throw ZeroScalar();
  ModuleLattice S = M;
  for (size_t i = 0; i < M.rank; ++i)
    for (size_t j = 0; j < M.rank; ++j) S.basis(i, j) = M.K()->mul(M.basis(i, j), c);
  return S;
}

inline ModuleLattice scale(const ModuleLattice& M, const mpq_class& q) {
  return scale(M, M.K()->from_rational(q));
}

inline ModuleLattice direct_sum(const ModuleLattice& A, const ModuleLattice& B) {
  if (A.field.get() != B.field.get()) throw FieldMismatch();
  ModuleLattice S;
  S.field = A.field;
  S.rank = A.rank + B.rank;
  S.basis = MatK(A.K(), S.rank, S.rank);
  for (size_t i = 0; i < A.rank; ++i)
    for (size_t j = 0; j < A.rank; ++j) S.basis(i, j) = A.basis(i, j);
  for (size_t i = 0; i < B.rank; ++i)
    for (size_t j = 0; j < B.rank; ++j) S.basis(A.rank + i, A.rank + j) = B.basis(i, j);
  S.ideals = A.ideals;
  S.ideals.insert(S.ideals.end(), B.ideals.begin(), B.ideals.end());
  return S;
}

inline long size_of(const ModuleLattice& M) { return M.size_bits(); }

// ---------------------------------------------------------------------------
// Embedded lattices and real pseudo-bases

// Block-diagonal element of GL_r(K_R): one block per infinite place.
struct GLrElement {
  std::vector<MatR> re_blocks;  // r1 blocks
  std::vector<MatC> cx_blocks;  // r2 blocks

  static GLrElement identity(const NumberField& K, size_t r) {
    GLrElement g;
    g.re_blocks.assign(K.r1, MatR::identity(r));
    g.cx_blocks.assign(K.r2, matc_identity(r));
    return g;
  }

  GLrElement mul(const GLrElement& o) const {
    GLrElement g;
    g.re_blocks.reserve(re_blocks.size());
    for (size_t v = 0; v < re_blocks.size(); ++v) g.re_blocks.push_back(re_blocks[v] * o.re_blocks[v]);
    for (size_t v = 0; v < cx_blocks.size(); ++v) g.cx_blocks.push_back(mul_c(cx_blocks[v], o.cx_blocks[v]));
    return g;
  }

  GLrElement inverse() const {
    GLrElement g;
    for (const auto& b : re_blocks) g.re_blocks.push_back(inverse_r(b));
    for (const auto& b : cx_blocks) g.cx_blocks.push_back(inverse_c(b));
    return g;
  }

  // Operator norm on K_R^r with the canonical metric: max over places.
  Real op_norm_all() const {
    Real m = 0;
    for (const auto& b : re_blocks) m = std::max(m, op_norm(b));
    for (const auto& b : cx_blocks) m = std::max(m, op_norm_c(b));
    return m;
  }

  Real conditioning() const { return op_norm_all() * inverse().op_norm_all(); }

  // |N(det)| = prod_v |det g_v|^{[K_v:R]}.
  Real abs_norm_det() const {
    Real p = 1;
    for (const auto& b : re_blocks) p *= abs(det_r(b));
    for (const auto& b : cx_blocks) p *= det_c(b).norm2();
    return p;
  }

  // rho(g) for determinant-normalized blocks.
  Real rho() const {
    Real m = 0;
    size_t r = re_blocks.empty() ? cx_blocks[0].rows() : re_blocks[0].rows();
    for (const auto& b : re_blocks) {
      Real dn = pow(abs(det_r(b)), Real(1) / static_cast<int>(r));
      m = std::max(m, log(op_norm(b) / dn));
      MatR binv = inverse_r(b);
      m = std::max(m, log(op_norm(binv) * dn));
    }
    for (const auto& b : cx_blocks) {
      Real dn = pow(sqrt(det_c(b).norm2()), Real(1) / static_cast<int>(r));
      m = std::max(m, log(op_norm_c(b) / dn));
      MatC binv = inverse_c(b);
      m = std::max(m, log(op_norm_c(binv) * dn));
    }
    return m;
  }
};

// Pseudo-basis with real-embedded coefficient matrix. Ideals stay exact, so
// lattice vectors keep exact K-coordinates.
struct RealModule {
  FieldPtr field;
  size_t rank = 0;
  std::vector<MatR> re_blocks;  // r1 blocks, r x r each
  std::vector<MatC> cx_blocks;  // r2 blocks
  std::vector<Ideal> ideals;
  std::optional<ModuleLattice> exact;  // set when the basis is exact over K

  const NumberField* K() const { return field.get(); }
  size_t ambient_dim() const { return rank * field->d; }

  static RealModule from_exact(const ModuleLattice& M) {
    RealModule R;
    R.field = M.field;
    R.rank = M.rank;
    R.ideals = M.ideals;
    R.exact = M;
    const NumberField& K = *M.K();
    R.re_blocks.assign(K.r1, MatR(M.rank, M.rank, Real(0)));
    R.cx_blocks.assign(K.r2, MatC(M.rank, M.rank, Cx(Real(0))));
    for (size_t i = 0; i < M.rank; ++i)
      for (size_t j = 0; j < M.rank; ++j) {
        KRElement e = K.embed(M.basis(i, j));
        for (int v = 0; v < K.r1; ++v) R.re_blocks[v](i, j) = e.re[v];
        for (int v = 0; v < K.r2; ++v) R.cx_blocks[v](i, j) = e.cx[v];
      }
    return R;
  }

  RealModule apply(const GLrElement& g) const {
    RealModule R = *this;
    R.exact.reset();
    for (size_t v = 0; v < re_blocks.size(); ++v) R.re_blocks[v] = g.re_blocks[v] * re_blocks[v];
    for (size_t v = 0; v < cx_blocks.size(); ++v) R.cx_blocks[v] = mul_c(g.cx_blocks[v], cx_blocks[v]);
    return R;
  }
};

// Embedded lattice with exact pullback bookkeeping.
struct EmbeddedLattice {
  size_t n = 0;
  MatR basis;  // n x n, columns are lattice basis vectors
  std::optional<MatQ> gram_exact;
  FieldPtr field;
  size_t rank = 0;
  std::vector<Ideal> ideals;
  // Column j of `basis` is (slot s_j, ideal-basis element alpha_j).
  std::vector<size_t> col_slot;
  std::vector<FieldElem> col_alpha;

  MatR gram() const {
    MatR g(n, n, Real(0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) {
        Real s = 0;
        for (size_t k = 0; k < n; ++k) s += basis(k, i) * basis(k, j);
        g(i, j) = s;
        g(j, i) = s;
      }
    return g;
  }

  Real det() const {
    Real d2 = det_r(gram());
    if (d2 <= 0) throw PrecisionExhausted("degenerate embedded lattice");
    return sqrt(d2);
  }

  // Exact K-coordinates of the lattice vector with integer coordinates z.
  std::vector<FieldElem> pullback(const std::vector<mpz_class>& z) const {
    const NumberField& K = *field;
    std::vector<FieldElem> w(rank, K.zero());
    for (size_t j = 0; j < n; ++j)
      if (z[j] != 0)
        w[col_slot[j]] = K.add(w[col_slot[j]], K.mul_scalar(col_alpha[j], mpq_class(z[j])));
    return w;
  }

  std::vector<Real> vector_of(const std::vector<mpz_class>& z) const {
    std::vector<Real> v(n, Real(0));
    for (size_t j = 0; j < n; ++j)
      if (z[j] != 0)
        for (size_t i = 0; i < n; ++i) v[i] += to_real(mpq_class(z[j])) * basis(i, j);
    return v;
  }
};

namespace detail {

inline void embed_columns(EmbeddedLattice& E, const RealModule& M) {
  const NumberField& K = *M.field;
  size_t r = M.rank, d = K.d, n = r * d;
  E.n = n;
  E.basis = MatR(n, n, Real(0));
  E.field = M.field;
  E.rank = r;
  E.ideals = M.ideals;
  E.col_slot.resize(n);
  E.col_alpha.assign(n, K.zero());
  Real s2 = sqrt(Real(2));
  size_t col = 0;
  for (size_t i = 0; i < r; ++i) {
    auto ib = K.ideal_basis(M.ideals[i]);
    for (int k = 0; k < K.d; ++k, ++col) {
      E.col_slot[col] = i;
      E.col_alpha[col] = ib[k];
      KRElement av = K.embed(ib[k]);
      // Component j of the column vector is B[j][i] * alpha, per place.
      for (size_t j = 0; j < r; ++j) {
        size_t base = j * d;
        size_t off = 0;
        for (int v = 0; v < K.r1; ++v, ++off)
          E.basis(base + off, col) = M.re_blocks[v](j, i) * av.re[v];
        for (int v = 0; v < K.r2; ++v, off += 2) {
          Cx z = M.cx_blocks[v](j, i) * av.cx[v];
          E.basis(base + off, col) = s2 * z.re;
          E.basis(base + off + 1, col) = s2 * z.im;
        }
      }
    }
  }
}

}  // namespace detail

inline EmbeddedLattice embed_lattice(const RealModule& M) {
  EmbeddedLattice E;
  detail::embed_columns(E, M);
  // Exact Gram when the basis is exact and conjugation is an automorphism.
  if (M.exact && M.field->has_exact_gram()) {
    const NumberField& K = *M.field;
    const ModuleLattice& X = *M.exact;
    size_t n = E.n, r = M.rank;
    MatQ g(n, n, mpq_class(0));
    std::vector<std::vector<FieldElem>> colvecs(n, std::vector<FieldElem>(r, K.zero()));
    for (size_t c = 0; c < n; ++c)
      for (size_t j = 0; j < r; ++j)
        colvecs[c][j] = K.mul(X.basis(j, E.col_slot[c]), E.col_alpha[c]);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = a; b < n; ++b) {
        mpq_class s = 0;
        for (size_t j = 0; j < r; ++j) s += K.inner_exact(colvecs[a][j], colvecs[b][j]);
        g(a, b) = s;
        g(b, a) = s;
      }
    E.gram_exact = g;
  }
  return E;
}

inline EmbeddedLattice embed_lattice(const ModuleLattice& M) {
  return embed_lattice(RealModule::from_exact(M));
}

}  // namespace modlat
