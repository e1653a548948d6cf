#pragma once

#include "modlat/linalg.hpp"

#include <algorithm>
#include <map>

namespace modlat {

// Polynomial over Q, coefficients low-to-high.
struct PolyQ {
  std::vector<mpq_class> c;

  PolyQ() {}
  explicit PolyQ(std::vector<mpq_class> cc) : c(std::move(cc)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  mpq_class lead() const { return c.empty() ? mpq_class(0) : c.back(); }
  mpq_class at(size_t i) const { return i < c.size() ? c[i] : mpq_class(0); }

  mpq_class eval(const mpq_class& x) const {
    mpq_class v = 0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
  }
};

inline PolyQ poly_add(const PolyQ& a, const PolyQ& b) {
  std::vector<mpq_class> r(std::max(a.c.size(), b.c.size()), mpq_class(0));
  for (size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) + b.at(i);
  return PolyQ(std::move(r));
}

inline PolyQ poly_sub(const PolyQ& a, const PolyQ& b) {
  std::vector<mpq_class> r(std::max(a.c.size(), b.c.size()), mpq_class(0));
  for (size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) - b.at(i);
  return PolyQ(std::move(r));
}

inline PolyQ poly_mul(const PolyQ& a, const PolyQ& b) {
  if (a.is_zero() || b.is_zero()) return PolyQ();
  std::vector<mpq_class> r(a.c.size() + b.c.size() - 1, mpq_class(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return PolyQ(std::move(r));
}

// Division with remainder; b nonzero.
inline std::pair<PolyQ, PolyQ> poly_divmod(PolyQ a, const PolyQ& b) {
  assert(!b.is_zero());
  PolyQ q;
  if (a.deg() >= b.deg()) q.c.assign(a.deg() - b.deg() + 1, mpq_class(0));
  while (!a.is_zero() && a.deg() >= b.deg()) {
    mpq_class f = a.lead() / b.lead();
    int shift = a.deg() - b.deg();
    q.c[shift] = f;
    for (size_t i = 0; i < b.c.size(); ++i) a.c[i + shift] -= f * b.c[i];
    a.trim();
  }
  q.trim();
  return {q, a};
}

inline PolyQ poly_derivative(const PolyQ& a) {
  if (a.deg() <= 0) return PolyQ();
  std::vector<mpq_class> r(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) r[i - 1] = a.c[i] * static_cast<long>(i);
  return PolyQ(std::move(r));
}

inline PolyQ poly_monic(PolyQ a) {
  if (a.is_zero()) return a;
  mpq_class l = a.lead();
  for (auto& x : a.c) x /= l;
  return a;
}

inline PolyQ poly_gcd(PolyQ a, PolyQ b) {
  while (!b.is_zero()) {
    auto [q, r] = poly_divmod(a, b);
    a = b;
    b = r;
  }
  return poly_monic(a);
}

inline Real poly_eval_real(const PolyQ& a, const Real& x) {
  Real v = 0;
  for (size_t i = a.c.size(); i-- > 0;) v = v * x + to_real(a.c[i]);
  return v;
}

inline Cx poly_eval_cx(const PolyQ& a, const Cx& x) {
  Cx v(Real(0));
  for (size_t i = a.c.size(); i-- > 0;) v = v * x + Cx(to_real(a.c[i]));
  return v;
}

// Number of distinct real roots via a Sturm chain.
inline int count_real_roots(const PolyQ& f0) {
  PolyQ f = poly_monic(f0);
  f = poly_divmod(f, poly_gcd(f, poly_derivative(f))).first;  // squarefree part
  std::vector<PolyQ> chain{f, poly_derivative(f)};
  while (!chain.back().is_zero()) {
    auto [q, r] = poly_divmod(chain[chain.size() - 2], chain.back());
    for (auto& x : r.c) x = -x;
    r.trim();
    chain.push_back(r);
  }
  chain.pop_back();
  auto signs_at_inf = [&](int dir) {
    int changes = 0, prev = 0;
    for (const auto& p : chain) {
      if (p.is_zero()) continue;
      int s = sgn(p.lead());
      if (dir < 0 && p.deg() % 2 == 1) s = -s;
      if (prev != 0 && s != 0 && s != prev) ++changes;
      if (s != 0) prev = s;
    }
    return changes;
  };
  return signs_at_inf(-1) - signs_at_inf(+1);
}

// Resultant via the Sylvester matrix (exact).
inline mpq_class resultant(const PolyQ& a, const PolyQ& b) {
  int m = a.deg(), n = b.deg();
  assert(m >= 0 && n >= 0);
  if (m == 0) {
    mpq_class r = 1;
    for (int i = 0; i < n; ++i) r *= a.c[0];
    return r;
  }
  if (n == 0) {
    mpq_class r = 1;
    for (int i = 0; i < m; ++i) r *= b.c[0];
    return r;
  }
  MatQ s(m + n, m + n, mpq_class(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s(i, i + j) = a.c[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s(n + i, i + j) = b.c[n - j];
  return det_q(s);
}

inline mpq_class poly_discriminant(const PolyQ& f) {
  int d = f.deg();
  mpq_class res = resultant(f, poly_derivative(f));
  mpq_class sign = ((static_cast<long>(d) * (d - 1) / 2) % 2 == 0) ? 1 : -1;
  return sign * res / f.lead();
}

// All complex roots of a squarefree polynomial by Durand-Kerner iteration.
// Precision: current working precision; deterministic start.
inline std::vector<Cx> complex_roots(const PolyQ& f0) {
  PolyQ f = poly_monic(f0);
  int d = f.deg();
  std::vector<Cx> z(d);
  // Cauchy bound on root magnitude.
  Real bound = 1;
  for (int i = 0; i < d; ++i) {
    Real m = abs(to_real(f.c[i]));
    if (m + 1 > bound) bound = m + 1;
  }
  Real ang0 = Real("0.4");
  Real pi = real_pi();
  for (int i = 0; i < d; ++i) {
    Real t = ang0 + 2 * pi * i / d;
    z[i] = Cx(bound * cos(t) / 2, bound * sin(t) / 2 + Real("0.1"));
  }
  Real eps = ldexp(Real(1), -static_cast<int>(precision_bits()) + 6);
  for (int iter = 0; iter < 2000; ++iter) {
    Real worst = 0;
    for (int i = 0; i < d; ++i) {
      Cx num = poly_eval_cx(f, z[i]);
      Cx den(Real(1));
      for (int j = 0; j < d; ++j)
        if (j != i) den = den * (z[i] - z[j]);
      Cx delta = num / den;
      z[i] -= delta;
      Real m = delta.abs();
      if (m > worst) worst = m;
    }
    if (worst < eps) break;
  }
  // Deterministic order: by real part, then imaginary part.
  std::sort(z.begin(), z.end(), [](const Cx& a, const Cx& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  return z;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (p < 2^31), coefficients in [0, p).

struct PolyP {
  std::uint64_t p;
  std::vector<std::uint64_t> c;  // low-to-high

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
};

namespace fp {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

inline PolyP make(std::uint64_t p, std::vector<std::uint64_t> c) {
  PolyP f{p, std::move(c)};
  f.trim();
  return f;
}

inline PolyP mul(const PolyP& a, const PolyP& b) {
  if (a.is_zero() || b.is_zero()) return {a.p, {}};
  std::vector<std::uint64_t> r(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r[i + j] = (r[i + j] + mulmod(a.c[i], b.c[j], a.p)) % a.p;
  return make(a.p, std::move(r));
}

inline PolyP sub(const PolyP& a, const PolyP& b) {
  std::vector<std::uint64_t> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.c.size() ? a.c[i] : 0;
    std::uint64_t y = i < b.c.size() ? b.c[i] : 0;
    r[i] = (x + a.p - y) % a.p;
  }
  return make(a.p, std::move(r));
}

inline std::pair<PolyP, PolyP> divmod(PolyP a, const PolyP& b) {
  assert(!b.is_zero());
  std::uint64_t p = b.p;
  PolyP q{p, {}};
  if (a.deg() >= b.deg()) q.c.assign(a.deg() - b.deg() + 1, 0);
  std::uint64_t linv = invmod(b.c.back(), p);
  while (!a.is_zero() && a.deg() >= b.deg()) {
    std::uint64_t f = mulmod(a.c.back(), linv, p);
    int shift = a.deg() - b.deg();
    q.c[shift] = f;
    for (size_t i = 0; i < b.c.size(); ++i)
      a.c[i + shift] = (a.c[i + shift] + p - mulmod(f, b.c[i], p)) % p;
    a.trim();
  }
  q.trim();
  return {q, a};
}

inline PolyP gcd(PolyP a, PolyP b) {
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    a = b;
    b = r;
  }
  if (!a.is_zero()) {
    std::uint64_t linv = invmod(a.c.back(), a.p);
    for (auto& x : a.c) x = mulmod(x, linv, a.p);
  }
  return a;
}

inline PolyP powmod_poly(PolyP base, mpz_class e, const PolyP& mod) {
  PolyP r = make(mod.p, {1});
  base = divmod(base, mod).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = divmod(mul(r, base), mod).second;
    base = divmod(mul(base, base), mod).second;
    e >>= 1;
  }
  return r;
}

inline PolyP derivative(const PolyP& a) {
  if (a.deg() <= 0) return {a.p, {}};
  std::vector<std::uint64_t> r(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) r[i - 1] = mulmod(a.c[i], i % a.p, a.p);
  return make(a.p, std::move(r));
}

inline PolyP monic(PolyP a) {
  if (a.is_zero()) return a;
  std::uint64_t linv = invmod(a.c.back(), a.p);
  for (auto& x : a.c) x = mulmod(x, linv, a.p);
  return a;
}

// p-th root of a polynomial in x^p (valid over F_p).
inline PolyP pth_root(const PolyP& a) {
  std::vector<std::uint64_t> r;
  for (size_t i = 0; i < a.c.size(); i += a.p) r.push_back(a.c[i]);
  return make(a.p, std::move(r));
}

}  // namespace fp

// Full factorization of f mod p: list of (irreducible monic factor, multiplicity).
// Distinct-degree + Cantor-Zassenhaus, deterministic given (p, f).
inline std::vector<std::pair<PolyP, int>> factor_mod_p(const PolyP& f_in) {
  using namespace fp;
  std::uint64_t p = f_in.p;
  std::map<std::vector<std::uint64_t>, int> result;

  std::function<void(PolyP, int)> factor_sf;  // factor squarefree poly, add with mult
  Rng rng(0x9d2c5680u ^ (p * 0x100000001b3ULL) ^ f_in.c.size());

  auto add_factor = [&](const PolyP& g, int mult) { result[g.c] += mult; };

  factor_sf = [&](PolyP g, int mult) {
    g = monic(g);
    if (g.deg() <= 0) return;
    if (g.deg() == 1) {
      add_factor(g, mult);
      return;
    }
    // Distinct-degree split.
    PolyP x = make(p, {0, 1});
    PolyP h = x;  // x^(p^k) mod g, incrementally
    PolyP rest = g;
    for (int k = 1; 2 * k <= rest.deg(); ++k) {
      h = powmod_poly(h, mpz_class(static_cast<unsigned long>(p)), rest);
      PolyP hk = sub(h, x);
      PolyP d = gcd(hk, rest);
      if (d.deg() > 0) {
        // d = product of all degree-k irreducible factors; equal-degree split.
        std::function<void(PolyP)> edf = [&](PolyP e) {
          if (e.deg() == k) {
            add_factor(monic(e), mult);
            return;
          }
          for (;;) {
            // Random poly of degree < e.deg().
            std::vector<std::uint64_t> rc(e.deg());
            for (auto& cc : rc) cc = rng.below(p);
            PolyP r = make(p, std::move(rc));
            if (r.is_zero()) continue;
            PolyP d1 = gcd(r, e);
            if (d1.deg() > 0 && d1.deg() < e.deg()) {
              edf(d1);
              edf(divmod(e, d1).first);
              return;
            }
            PolyP s;
            if (p == 2) {
              // Trace map r + r^2 + r^4 + ... over F_{2^k}.
              PolyP t = r, acc = r;
              for (int i = 1; i < k; ++i) {
                t = divmod(mul(t, t), e).second;
                std::vector<std::uint64_t> sum(std::max(acc.c.size(), t.c.size()), 0);
                for (size_t ci = 0; ci < sum.size(); ++ci) {
                  std::uint64_t x = ci < acc.c.size() ? acc.c[ci] : 0;
                  std::uint64_t y = ci < t.c.size() ? t.c[ci] : 0;
                  sum[ci] = (x + y) % p;
                }
                acc = make(p, std::move(sum));
              }
              s = acc;
            } else {
              mpz_class pk;
              mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                            static_cast<unsigned long>(k));
              s = powmod_poly(r, (pk - 1) / 2, e);
              s = sub(s, make(p, {1}));
            }
            PolyP d2 = gcd(s, e);
            if (d2.deg() > 0 && d2.deg() < e.deg()) {
              edf(d2);
              edf(divmod(e, d2).first);
              return;
            }
          }
        };
        edf(d);
        rest = divmod(rest, d).first;
        h = divmod(h, rest).second;
      }
    }
    if (rest.deg() > 0) add_factor(monic(rest), mult);
  };

  // Squarefree decomposition (Yun, char p variant).
  std::function<void(PolyP, int)> sqf = [&](PolyP g, int mult) {
    g = monic(g);
    if (g.deg() <= 0) return;
    PolyP d = derivative(g);
    if (d.is_zero()) {
      sqf(pth_root(g), mult * static_cast<int>(p));
      return;
    }
    PolyP c = gcd(g, d);
    PolyP w = divmod(g, c).first;
    int i = 1;
    while (w.deg() > 0) {
      PolyP y = gcd(w, c);
      PolyP fac = divmod(w, y).first;
      if (fac.deg() > 0) factor_sf(fac, mult * i);
      w = y;
      c = divmod(c, y).first;
      ++i;
    }
    if (c.deg() > 0) sqf(c, mult);  // c is a p-th power times units
  };

  sqf(f_in, 1);

  std::vector<std::pair<PolyP, int>> out;
  for (auto& [coeffs, mult] : result) out.push_back({fp::make(p, coeffs), mult});
  // Deterministic order: by degree, then lexicographic coefficients.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
    return a.first.c < b.first.c;
  });
  return out;
}

// Reduce an integer polynomial mod p.
inline PolyP reduce_mod_p(const PolyQ& f, std::uint64_t p) {
  std::vector<std::uint64_t> c(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) {
    assert(f.c[i].get_den() == 1);
    mpz_class r;
    mpz_mod_ui(r.get_mpz_t(), f.c[i].get_num().get_mpz_t(), static_cast<unsigned long>(p));
    c[i] = r.get_ui();
  }
  return fp::make(p, std::move(c));
}

// Irreducibility over Q of a monic integer polynomial. Sound and complete at
// working precision: a monic rational factor corresponds to a conjugate-closed
// subset of complex roots; each candidate is rounded and verified by exact
// division.
inline bool is_irreducible_monic(const PolyQ& f) {
  int d = f.deg();
  if (d <= 0) return false;
  if (d == 1) return true;
  for (const auto& q : f.c) assert(q.get_den() == 1);
  // Squarefree test first: gcd(f, f') must be constant.
  if (poly_gcd(f, poly_derivative(f)).deg() > 0) return false;
  ScopedPrecision prec(std::max(precision_bits(), 256u));
  auto roots = complex_roots(f);
  int half = d / 2;
  // Iterate over nonempty subsets of size <= d/2.
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    int k = __builtin_popcount(mask);
    if (k < 1 || k > half) continue;
    // Multiply (x - z_i) over the subset; coeff is high-to-low, coeff[0] = 1.
    std::vector<Cx> coeff(k + 1, Cx(Real(0)));
    coeff[0] = Cx(Real(1));
    int used = 0;
    for (int i = 0; i < d; ++i) {
      if (!(mask & (1u << i))) continue;
      ++used;
      for (int j = used; j >= 1; --j) coeff[j] = coeff[j] - roots[i] * coeff[j - 1];
    }
    bool real_ok = true;
    std::vector<mpq_class> g(k + 1);
    for (int j = 0; j <= k; ++j) {
      Real re = coeff[k - j].re, im = coeff[k - j].im;
      if (abs(im) > Real("0.01")) {
        real_ok = false;
        break;
      }
      Real rounded = floor(re + Real("0.5"));
      if (abs(re - rounded) > Real("0.01")) {
        real_ok = false;
        break;
      }
      g[j] = mpq_class(real_to_mpz(rounded));
    }
    if (!real_ok) continue;
    PolyQ cand{std::vector<mpq_class>(g.begin(), g.end())};
    if (cand.deg() != k) continue;
    auto [quot, rem] = poly_divmod(f, cand);
    if (rem.is_zero()) return false;
  }
  return true;
}

}  // namespace modlat
