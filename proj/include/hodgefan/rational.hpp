#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hodgefan {

// Exact rational scalar. All arithmetic in the library is exact; no floating
// point appears anywhere in a computation that feeds a verdict.
using Rat = mpq_class;

// Parse "p", "-p", or "p/q" (q > 0 after canonicalization). Throws
// std::invalid_argument on malformed input or a zero denominator.
Rat rat_from_string(const std::string& s);

// Canonical form: "p" when the denominator is 1, otherwise "p/q" with q > 0
// and gcd(p, q) = 1.
std::string rat_to_string(const Rat& r);

long rat_sign(const Rat& r);

// Gaussian rational a + b*i over Rat. Enough field arithmetic for Hermitian
// forms and conjugation-aware subspace work; no general complex numbers.
struct GaussRat {
  Rat re{0};
  Rat im{0};

  GaussRat() = default;
  GaussRat(Rat r) : re(std::move(r)) {}
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  GaussRat(int n) : re(n) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussRat conj() const { return GaussRat(re, Rat(-im)); }

  GaussRat operator-() const { return GaussRat(Rat(-re), Rat(-im)); }
  GaussRat& operator+=(const GaussRat& o);
  GaussRat& operator-=(const GaussRat& o);
  GaussRat& operator*=(const GaussRat& o);
  GaussRat& operator/=(const GaussRat& o);

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
};

// The imaginary unit.
GaussRat gauss_i();

// i^k for any integer k (k may be negative).
GaussRat gauss_i_pow(long k);

// Parse "p/q", "p/q+r/s i", or "p/q-r/s i" (whitespace around tokens is
// tolerated; a purely imaginary value still carries the real part, e.g.
// "0+1 i"). Throws std::invalid_argument on malformed input.
GaussRat gauss_from_string(const std::string& s);

// Canonical form: plain rational string when the imaginary part vanishes,
// otherwise "<re>+<im> i" / "<re>-<im> i" with both parts in canonical
// rational form.
std::string gauss_to_string(const GaussRat& g);

// Least common multiple of the denominators encountered so far; feed values
// through accumulate and read the result. Used for denominator clearing
// (integrality scales, index denominators).
struct DenominatorLcm {
  mpz_class value{1};
  void accumulate(const Rat& r);
};

}  // namespace hodgefan
