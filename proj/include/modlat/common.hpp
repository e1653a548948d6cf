#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modlat {

// Arbitrary-precision real. Precision is a process-wide default, settable in
// bits (MODLAT_PRECISION) with a floor of 128.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

inline unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(bits * 0.3010299956639812) + 2;
}

inline unsigned& precision_bits_ref() {
  static unsigned bits = 128;
  return bits;
}

inline void set_precision_bits(unsigned bits) {
  if (bits < 128) bits = 128;
  precision_bits_ref() = bits;
  Real::default_precision(bits_to_digits10(bits));
}

inline unsigned precision_bits() { return precision_bits_ref(); }

struct ScopedPrecision {
  unsigned saved;
  explicit ScopedPrecision(unsigned bits) : saved(precision_bits()) { set_precision_bits(bits); }
  ~ScopedPrecision() { set_precision_bits(saved); }
};

// Initializes precision from the environment once; call at program start.
inline void init_precision_from_env() {
  if (const char* p = std::getenv("MODLAT_PRECISION")) {
    long b = std::atol(p);
    if (b > 0) { set_precision_bits(static_cast<unsigned>(b)); return; }
  }
  set_precision_bits(128);
}

// Minimal complex number over Real. std::complex is not specified for
// user-defined numeric types.
struct Cx {
  Real re, im;
  Cx() : re(0), im(0) {}
  Cx(Real r) : re(std::move(r)), im(0) {}
  Cx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Cx operator+(const Cx& o) const { return {re + o.re, im + o.im}; }
  Cx operator-(const Cx& o) const { return {re - o.re, im - o.im}; }
  Cx operator-() const { return {-re, -im}; }
  Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Cx operator*(const Real& s) const { return {re * s, im * s}; }
  Cx conj() const { return {re, -im}; }
  Real norm2() const { return re * re + im * im; }
  Real abs() const { return sqrt(norm2()); }
  Cx inv() const {
    Real n = norm2();
    return {re / n, -im / n};
  }
  Cx operator/(const Cx& o) const { return *this * o.inv(); }
  Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
  Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
};

inline Cx cx_exp_i(const Real& theta) { return Cx(cos(theta), sin(theta)); }

// pi at the current working precision.
inline Real real_pi() {
  Real p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return p;
}

// Nearest integer of a Real as an exact integer.
inline mpz_class real_to_mpz(const Real& x) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDN);
  return z;
}

// ---------------------------------------------------------------------------
// Error types

#define MODLAT_ERROR(Name)                                        \
  struct Name : std::runtime_error {                              \
    explicit Name(const std::string& m = #Name)                   \
        : std::runtime_error(std::string(#Name) + ": " + m) {}    \
  }

MODLAT_ERROR(ReducibleDefiningPolynomial);
MODLAT_ERROR(SingularBasisMatrix);
MODLAT_ERROR(PrecisionExhausted);
MODLAT_ERROR(ZeroIdeal);
MODLAT_ERROR(IndexDivisorUnsupported);
MODLAT_ERROR(EmptyPrimeSet);
MODLAT_ERROR(RankDeficient);
MODLAT_ERROR(FieldMismatch);
MODLAT_ERROR(DimensionTooLarge);
MODLAT_ERROR(TooManySublattices);
MODLAT_ERROR(InvalidQuotientRank);
MODLAT_ERROR(SigmaTooSmallForGrid);
MODLAT_ERROR(TOutOfRange);
MODLAT_ERROR(SigmaBelowSmoothing);
MODLAT_ERROR(NotBalanced);
MODLAT_ERROR(IndependenceStallTimeout);
MODLAT_ERROR(NotIsomorphic);
MODLAT_ERROR(GapTooSmall);
MODLAT_ERROR(NoPrimeInWindow);
MODLAT_ERROR(RetriesExhausted);
MODLAT_ERROR(OracleNeverAccepted);
MODLAT_ERROR(MissingConstants);
MODLAT_ERROR(ZeroScalar);

#undef MODLAT_ERROR

// ---------------------------------------------------------------------------
// Deterministic RNG: xoshiro256** seeded through splitmix64. No libc or
// libstdc++ distributions anywhere, so streams are identical across builds.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
    draws_ = 0;
  }

  // Independent child stream, derived from (seed, index).
  Rng child(std::uint64_t index) const {
    Rng r(0);
    std::uint64_t x = s_[0] ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t y = s_[2] ^ (0xbf58476d1ce4e5b9ULL * (index + 1));
    std::uint64_t m = x ^ (y << 1);
    r.reseed(m);
    return r;
  }

  std::uint64_t u64() {
    ++draws_;
    if (recording_) record_.push_back(peek_next());
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      std::uint64_t r = u64();
      if (r >= threshold) return r % bound;
    }
  }

  mpz_class below(const mpz_class& bound) {
    if (bound <= 0) throw std::invalid_argument("Rng::below: bound <= 0");
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
      mpz_class r = random_bits(bits);
      if (r < bound) return r;
    }
  }

  mpz_class random_bits(size_t bits) {
    mpz_class r = 0;
    size_t words = (bits + 63) / 64;
    for (size_t i = 0; i < words; ++i) {
      r <<= 64;
      r += mpz_class(static_cast<unsigned long>(u64() >> 32)) << 32 |
           mpz_class(static_cast<unsigned long>(u64() & 0xffffffffULL));
    }
    size_t excess = words * 64 - bits;
    r >>= excess;
    return r;
  }

  // Uniform real in [0,1) at current working precision.
  Real real01() {
    unsigned bits = precision_bits();
    mpz_class m = random_bits(bits);
    Real r(m.get_str());
    return ldexp(r, -static_cast<int>(bits));
  }

  // Uniform on the grid (1/N)Z intersected with [0,1).
  mpq_class grid01(const mpz_class& N) { return mpq_class(below(N), N); }

  bool bernoulli_half() { return (u64() >> 63) != 0; }

  void start_recording() { recording_ = true; record_.clear(); }
  const std::vector<std::uint64_t>& record() const { return record_; }
  std::uint64_t draws() const { return draws_; }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t peek_next() const { return rotl(s_[1] * 5, 7) * 9; }

  std::uint64_t s_[4] = {1, 2, 3, 4};
  std::uint64_t draws_ = 0;
  bool recording_ = false;
  std::vector<std::uint64_t> record_;
};

// ---------------------------------------------------------------------------
// Rational helpers

inline mpq_class rat(long n, long d = 1) { return mpq_class(n, d); }

inline Real to_real(const mpq_class& q) {
  Real num(q.get_num().get_str());
  Real den(q.get_den().get_str());
  return num / den;
}

inline Real to_real(const mpz_class& z) { return Real(z.get_str()); }

// Floor of a rational as an integer.
inline mpz_class floor_q(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return f;
}

inline mpz_class round_q(const mpq_class& q) { return floor_q(q + mpq_class(1, 2)); }

// size(n) = 1 + ceil(log2 |n|), with size(0) = 1.
inline long bit_size(const mpz_class& n) {
  if (n == 0) return 1;
  mpz_class a = abs(n);
  size_t b = mpz_sizeinbase(a.get_mpz_t(), 2);  // floor(log2)+1
  // ceil(log2 a) = b-1 when a is a power of two, else b.
  bool pow2 = mpz_scan1(a.get_mpz_t(), 0) == b - 1;
  return 1 + static_cast<long>(pow2 ? b - 1 : b);
}

inline long bit_size(const mpq_class& q) { return bit_size(q.get_num()) + bit_size(q.get_den()); }

inline std::string rat_to_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline mpq_class rat_from_string(const std::string& s) {
  mpq_class q(s);
  q.canonicalize();
  return q;
}

}  // namespace modlat
