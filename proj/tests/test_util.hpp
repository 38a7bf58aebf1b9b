#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "hodgefan/matrix.hpp"

namespace tu {

using hodgefan::GaussRat;
using hodgefan::Mat;
using hodgefan::Rat;
using hodgefan::Vec;

inline Vec<Rat> V(std::initializer_list<long> xs) {
  Vec<Rat> v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}

inline Mat<Rat> M(std::initializer_list<std::initializer_list<long>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Mat<Rat> m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (long x : row) m.at(i, j++) = Rat(x);
    ++i;
  }
  return m;
}

// Matrix from "p/q" strings, for fractional fixtures.
inline Mat<Rat> Mq(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<std::vector<std::string>> s;
  for (const auto& row : rows) {
    s.emplace_back();
    for (const char* x : row) s.back().push_back(x);
  }
  return hodgefan::mat_from_strings(s);
}

inline Vec<GaussRat> GV(std::initializer_list<const char*> xs) {
  Vec<GaussRat> v;
  for (const char* x : xs) v.push_back(hodgefan::gauss_from_string(x));
  return v;
}

}  // namespace tu
