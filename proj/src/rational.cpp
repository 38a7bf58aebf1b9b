#include "hodgefan/rational.hpp"

#include <algorithm>
#include <cctype>

namespace hodgefan {

namespace {

bool valid_integer_token(const std::string& t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  }
  return true;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
  const std::string t = strip_spaces(s);
  const auto slash = t.find('/');
  const std::string num = slash == std::string::npos ? t : t.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!valid_integer_token(num) || !valid_integer_token(den)) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
  Rat r;
  if (r.set_str(t, 10) != 0) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
  if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0) {
    throw std::invalid_argument("zero denominator: '" + s + "'");
  }
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) { return r.get_str(); }

long rat_sign(const Rat& r) { return mpq_sgn(r.get_mpq_t()); }

GaussRat& GaussRat::operator+=(const GaussRat& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  Rat nre = re * o.re - im * o.im;
  Rat nim = re * o.im + im * o.re;
  re = nre;
  im = nim;
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  Rat n = o.re * o.re + o.im * o.im;
  if (n == 0) throw std::domain_error("division by zero gaussian rational");
  Rat nre = (re * o.re + im * o.im) / n;
  Rat nim = (im * o.re - re * o.im) / n;
  re = nre;
  im = nim;
  return *this;
}

GaussRat gauss_i() { return GaussRat(Rat(0), Rat(1)); }

GaussRat gauss_i_pow(long k) {
  long m = ((k % 4) + 4) % 4;
  switch (m) {
    case 0: return GaussRat(Rat(1), Rat(0));
    case 1: return GaussRat(Rat(0), Rat(1));
    case 2: return GaussRat(Rat(-1), Rat(0));
    default: return GaussRat(Rat(0), Rat(-1));
  }
}

GaussRat gauss_from_string(const std::string& s) {
  std::string t = strip_spaces(s);
  if (t.empty()) throw std::invalid_argument("empty gaussian rational");
  if (t.back() != 'i') return GaussRat(rat_from_string(t));
  t.pop_back();
  if (t.empty()) throw std::invalid_argument("malformed gaussian rational: '" + s + "'");
  // Find the sign that splits real and imaginary parts: the last '+' or '-'
  // that is not a leading sign and does not follow '/'.
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != '/' && t[i - 1] != '+' && t[i - 1] != '-') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    throw std::invalid_argument("malformed gaussian rational (no real part): '" + s + "'");
  }
  Rat re = rat_from_string(t.substr(0, split));
  Rat im = rat_from_string(t.substr(split + 1));
  if (t[split] == '-') im = -im;
  return GaussRat(std::move(re), std::move(im));
}

std::string gauss_to_string(const GaussRat& g) {
  if (g.im == 0) return rat_to_string(g.re);
  Rat aim = g.im < 0 ? Rat(-g.im) : g.im;
  return rat_to_string(g.re) + (g.im < 0 ? "-" : "+") + rat_to_string(aim) + " i";
}

void DenominatorLcm::accumulate(const Rat& r) {
  mpz_class den(mpq_denref(r.get_mpq_t()));
  mpz_lcm(value.get_mpz_t(), value.get_mpz_t(), den.get_mpz_t());
}

}  // namespace hodgefan
