#pragma once

#include "modlat/common.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace modlat {

// Dense column-major-ish matrix; storage row-major, accessors (row, col).
template <typename T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c) {}
  Mat(size_t r, size_t c, const T& fill) : rows_(r), cols_(c), a_(r * c, fill) {}

  static Mat identity(size_t n) {
    Mat m(n, n, T(0));
    for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  std::vector<T> col(size_t j) const {
    std::vector<T> v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(size_t j, const std::vector<T>& v) {
    for (size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  void swap_cols(size_t j, size_t k) {
    for (size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }

  Mat<T> transpose() const {
    Mat<T> t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  size_t rows_, cols_;
  std::vector<T> a_;
};

template <typename T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  assert(a.cols() == b.rows());
  Mat<T> c(a.rows(), b.cols(), T(0));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      for (size_t j = 0; j < b.cols(); ++j) c(i, j) = c(i, j) + aik * b(k, j);
    }
  return c;
}

template <typename T>
std::vector<T> operator*(const Mat<T>& a, const std::vector<T>& x) {
  assert(a.cols() == x.size());
  std::vector<T> y(a.rows(), T(0));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) y[i] = y[i] + a(i, j) * x[j];
  return y;
}

using MatQ = Mat<mpq_class>;
using MatZ = Mat<mpz_class>;
using MatR = Mat<Real>;
using MatC = Mat<Cx>;

inline MatQ to_matq(const MatZ& a) {
  MatQ q(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) q(i, j) = mpq_class(a(i, j));
  return q;
}

inline MatR to_matr(const MatQ& a) {
  MatR r(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) = to_real(a(i, j));
  return r;
}

// ---------------------------------------------------------------------------
// Exact rational linear algebra

inline mpq_class det_q(MatQ a) {
  assert(a.rows() == a.cols());
  size_t n = a.rows();
  mpq_class det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    mpq_class inv = 1 / a(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      mpq_class f = a(i, c) * inv;
      for (size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

inline size_t rank_q(MatQ a) {
  size_t n = a.rows(), m = a.cols(), r = 0;
  for (size_t c = 0; c < m && r < n; ++c) {
    size_t piv = r;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) continue;
    for (size_t j = 0; j < m; ++j) std::swap(a(piv, j), a(r, j));
    mpq_class inv = 1 / a(r, c);
    for (size_t i = r + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      mpq_class f = a(i, c) * inv;
      for (size_t j = c; j < m; ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

// Inverse; throws SingularBasisMatrix if singular.
inline MatQ inverse_q(MatQ a) {
  assert(a.rows() == a.cols());
  size_t n = a.rows();
  MatQ inv = MatQ::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) throw SingularBasisMatrix("matrix not invertible");
    if (piv != c)
      for (size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    mpq_class d = 1 / a(c, c);
    for (size_t j = 0; j < n; ++j) {
      a(c, j) *= d;
      inv(c, j) *= d;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      mpq_class f = a(i, c);
      for (size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

// Solve a*x = b over Q (a square nonsingular).
inline std::vector<mpq_class> solve_q(const MatQ& a, const std::vector<mpq_class>& b) {
  return inverse_q(a) * b;
}

// Right kernel basis over Q (columns of the result span ker a).
inline MatQ kernel_q(MatQ a) {
  size_t n = a.rows(), m = a.cols();
  std::vector<long> pivot_of_col(m, -1);
  size_t r = 0;
  for (size_t c = 0; c < m && r < n; ++c) {
    size_t piv = r;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) continue;
    for (size_t j = 0; j < m; ++j) std::swap(a(piv, j), a(r, j));
    mpq_class d = 1 / a(r, c);
    for (size_t j = 0; j < m; ++j) a(r, j) *= d;
    for (size_t i = 0; i < n; ++i) {
      if (i == r || a(i, c) == 0) continue;
      mpq_class f = a(i, c);
      for (size_t j = 0; j < m; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_of_col[c] = static_cast<long>(r);
    ++r;
  }
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < m; ++c)
    if (pivot_of_col[c] < 0) free_cols.push_back(c);
  MatQ k(m, free_cols.size(), mpq_class(0));
  for (size_t t = 0; t < free_cols.size(); ++t) {
    size_t fc = free_cols[t];
    k(fc, t) = 1;
    for (size_t c = 0; c < m; ++c) {
      long pr = pivot_of_col[c];
      if (pr >= 0) k(c, t) = -a(static_cast<size_t>(pr), fc);
    }
  }
  return k;
}

// ---------------------------------------------------------------------------
// Integer lattice algorithms (column HNF and friends)
//
// Convention: columns generate the lattice. The canonical HNF is upper
// triangular for square nonsingular input, pivots positive, and entries to
// the right of a pivot reduced into [0, pivot).

namespace detail {

// Eliminates row `i` across active columns [c0, cols) into column c0 using
// extended gcd column ops; returns false if the whole row is zero there.
inline bool hnf_row_step(MatZ& h, MatZ* u, size_t i, size_t c0) {
  size_t m = h.cols();
  size_t nz = c0;
  while (nz < m && h(i, nz) == 0) ++nz;
  if (nz == m) return false;
  if (nz != c0) {
    h.swap_cols(nz, c0);
    if (u) u->swap_cols(nz, c0);
  }
  for (size_t c = c0 + 1; c < m; ++c) {
    if (h(i, c) == 0) continue;
    mpz_class g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), h(i, c0).get_mpz_t(),
               h(i, c).get_mpz_t());
    mpz_class a = h(i, c0) / g, b = h(i, c) / g;
    // (col c0, col c) <- (x*c0 + y*c, -b*c0 + a*c); row i becomes (g, 0).
    for (size_t rr = 0; rr < h.rows(); ++rr) {
      mpz_class p = h(rr, c0), q = h(rr, c);
      h(rr, c0) = x * p + y * q;
      h(rr, c) = a * q - b * p;
    }
    if (u)
      for (size_t rr = 0; rr < u->rows(); ++rr) {
        mpz_class p = (*u)(rr, c0), q = (*u)(rr, c);
        (*u)(rr, c0) = x * p + y * q;
        (*u)(rr, c) = a * q - b * p;
      }
  }
  if (h(i, c0) < 0) {
    for (size_t rr = 0; rr < h.rows(); ++rr) h(rr, c0) = -h(rr, c0);
    if (u)
      for (size_t rr = 0; rr < u->rows(); ++rr) (*u)(rr, c0) = -(*u)(rr, c0);
  }
  return true;
}

}  // namespace detail

struct HnfResult {
  MatZ h;                     // d x rank, upper-triangular profile
  MatZ u;                     // m x m unimodular with a*u = [h | 0] (if requested)
  std::vector<size_t> pivot_rows;  // row of the pivot of each kept column
};

// Column HNF of a d x m integer matrix. Rows are processed bottom-up so the
// result is upper triangular: pivot of kept column c sits in row
// pivot_rows[c], strictly increasing in c; entries right of a pivot are
// reduced into [0, pivot). With the transform, a * u = [h | 0].
inline HnfResult col_hnf(const MatZ& a, bool with_transform = false) {
  size_t d = a.rows(), m = a.cols();
  MatZ h = a;
  MatZ u = MatZ::identity(m);
  MatZ* up = with_transform ? &u : nullptr;
  size_t next = 0;                 // columns [0, next) hold pivots found so far
  std::vector<size_t> pr;          // their pivot rows, bottom-up
  for (size_t ii = d; ii-- > 0 && next < m;) {
    if (detail::hnf_row_step(h, up, ii, next)) {
      pr.push_back(ii);
      ++next;
    }
  }
  // Reorder pivot columns by increasing pivot row (i.e. reverse), keep the
  // zero columns (kernel part) after them.
  MatZ h2(d, m), u2(with_transform ? m : 0, with_transform ? m : 0);
  for (size_t c = 0; c < next; ++c) {
    for (size_t i = 0; i < d; ++i) h2(i, c) = h(i, next - 1 - c);
    if (with_transform)
      for (size_t i = 0; i < m; ++i) u2(i, c) = u(i, next - 1 - c);
  }
  for (size_t c = next; c < m; ++c) {
    for (size_t i = 0; i < d; ++i) h2(i, c) = h(i, c);
    if (with_transform)
      for (size_t i = 0; i < m; ++i) u2(i, c) = u(i, c);
  }
  std::vector<size_t> pivot_rows(pr.rbegin(), pr.rend());
  // Reduce column j against pivot columns c < j, bottom pivot first, so a
  // reduction never disturbs one already done.
  for (size_t j = 1; j < pivot_rows.size(); ++j) {
    for (size_t c = j; c-- > 0;) {
      size_t prow = pivot_rows[c];
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), h2(prow, j).get_mpz_t(), h2(prow, c).get_mpz_t());
      if (q != 0) {
        for (size_t i = 0; i < d; ++i) h2(i, j) -= q * h2(i, c);
        if (with_transform)
          for (size_t i = 0; i < m; ++i) u2(i, j) -= q * u2(i, c);
      }
    }
  }
  HnfResult res;
  MatZ hk(d, pivot_rows.size());
  for (size_t c = 0; c < pivot_rows.size(); ++c)
    for (size_t i = 0; i < d; ++i) hk(i, c) = h2(i, c);
  res.h = std::move(hk);
  res.u = std::move(u2);
  res.pivot_rows = std::move(pivot_rows);
  return res;
}

// Basis of {x : a*x = 0} over Z; columns of the result.
inline MatZ integer_kernel(const MatZ& a) {
  HnfResult r = col_hnf(a, true);
  size_t rank = r.h.cols(), m = a.cols();
  MatZ k(m, m - rank);
  for (size_t c = rank; c < m; ++c)
    for (size_t i = 0; i < m; ++i) k(i, c - rank) = r.u(i, c);
  return k;
}

// One integer solution of a*x = b, if it exists.
inline std::optional<std::vector<mpz_class>> solve_z(const MatZ& a, const std::vector<mpz_class>& b) {
  HnfResult r = col_hnf(a, true);
  size_t d = a.rows(), m = a.cols(), k = r.h.cols();
  // Solve h*y = b by substitution along pivot rows (h upper-triangular profile).
  std::vector<mpz_class> y(k, 0), rem(b);
  for (size_t c = k; c-- > 0;) {
    size_t pr = r.pivot_rows[c];
    mpz_class q, rmd;
    mpz_fdiv_qr(q.get_mpz_t(), rmd.get_mpz_t(), rem[pr].get_mpz_t(), r.h(pr, c).get_mpz_t());
    if (rmd != 0) return std::nullopt;
    y[c] = q;
    for (size_t i = 0; i < d; ++i) rem[i] -= q * r.h(i, c);
  }
  for (size_t i = 0; i < d; ++i)
    if (rem[i] != 0) return std::nullopt;
  std::vector<mpz_class> x(m, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t c = 0; c < k; ++c) x[i] += r.u(i, c) * y[c];
  return x;
}

// ---------------------------------------------------------------------------
// Real matrix helpers

inline MatR matr_identity(size_t n) { return MatR::identity(n); }

inline Real frobenius(const MatR& a) {
  Real s = 0;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return sqrt(s);
}

inline MatR inverse_r(MatR a) {
  size_t n = a.rows();
  MatR inv = MatR::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    Real best = abs(a(c, c));
    for (size_t i = c + 1; i < n; ++i)
      if (abs(a(i, c)) > best) {
        best = abs(a(i, c));
        piv = i;
      }
    if (best == 0) throw PrecisionExhausted("singular real matrix");
    if (piv != c)
      for (size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    Real d = 1 / a(c, c);
    for (size_t j = 0; j < n; ++j) {
      a(c, j) *= d;
      inv(c, j) *= d;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      Real f = a(i, c);
      if (f == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline Real det_r(MatR a) {
  size_t n = a.rows();
  Real det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    Real best = abs(a(c, c));
    for (size_t i = c + 1; i < n; ++i)
      if (abs(a(i, c)) > best) {
        best = abs(a(i, c));
        piv = i;
      }
    if (best == 0) return Real(0);
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      Real f = a(i, c) / a(c, c);
      if (f == 0) continue;
      for (size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

// Eigenvalues of a symmetric real matrix by cyclic Jacobi.
inline std::vector<Real> sym_eigenvalues(MatR a) {
  size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < pow(Real(2), -2 * static_cast<int>(precision_bits()) + 16)) break;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0) continue;
        Real theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        Real t = (theta >= 0 ? Real(1) : Real(-1)) / (abs(theta) + sqrt(theta * theta + 1));
        Real c = 1 / sqrt(t * t + 1), s = t * c;
        for (size_t k = 0; k < n; ++k) {
          Real akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          Real apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<Real> ev(n);
  for (size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Spectral norm via eigenvalues of a^T a.
inline Real op_norm(const MatR& a) {
  MatR g(a.cols(), a.cols(), Real(0));
  for (size_t i = 0; i < a.cols(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      Real s = 0;
      for (size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
      g(i, j) = s;
    }
  auto ev = sym_eigenvalues(g);
  Real m = ev.back();
  if (m < 0) m = 0;
  return sqrt(m);
}

// Complex helpers for place blocks.
inline MatC matc_identity(size_t n) {
  MatC m(n, n, Cx(Real(0)));
  for (size_t i = 0; i < n; ++i) m(i, i) = Cx(Real(1));
  return m;
}

inline MatC operator*(const MatC& a, const MatC& b) = delete;  // use mul_c

inline MatC mul_c(const MatC& a, const MatC& b) {
  assert(a.cols() == b.rows());
  MatC c(a.rows(), b.cols(), Cx(Real(0)));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k)
      for (size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline MatC adjoint(const MatC& a) {
  MatC t(a.cols(), a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j).conj();
  return t;
}

inline Cx det_c(MatC a) {
  size_t n = a.rows();
  Cx det(Real(1));
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    Real best = a(c, c).norm2();
    for (size_t i = c + 1; i < n; ++i)
      if (a(i, c).norm2() > best) {
        best = a(i, c).norm2();
        piv = i;
      }
    if (best == 0) return Cx(Real(0));
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det = det * a(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      Cx f = a(i, c) / a(c, c);
      for (size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

inline MatC inverse_c(MatC a) {
  size_t n = a.rows();
  MatC inv = matc_identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    Real best = a(c, c).norm2();
    for (size_t i = c + 1; i < n; ++i)
      if (a(i, c).norm2() > best) {
        best = a(i, c).norm2();
        piv = i;
      }
    if (best == 0) throw PrecisionExhausted("singular complex matrix");
    if (piv != c)
      for (size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    Cx d = a(c, c).inv();
    for (size_t j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * d;
      inv(c, j) = inv(c, j) * d;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      Cx f = a(i, c);
      if (f.norm2() == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

// Spectral norm of a complex matrix: sqrt of top eigenvalue of a* a, via
// Jacobi on the 2n x 2n real embedding.
inline Real op_norm_c(const MatC& a) {
  size_t n = a.rows(), m = a.cols();
  MatR re(2 * n, 2 * m, Real(0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      re(i, j) = a(i, j).re;
      re(i, j + m) = -a(i, j).im;
      re(i + n, j) = a(i, j).im;
      re(i + n, j + m) = a(i, j).re;
    }
  return op_norm(re);
}

}  // namespace modlat
