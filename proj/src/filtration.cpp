#include "hodgefan/filtration.hpp"

#include <random>

namespace hodgefan {

WeightFiltration WeightFiltration::from_steps(int center,
                                              const std::map<int, Subspace<Rat>>& steps,
                                              int ambient) {
  if (steps.empty()) throw std::invalid_argument("weight filtration needs at least one step");
  WeightFiltration out;
  out.center = center;
  const int klo = steps.begin()->first;
  const int khi = steps.rbegin()->first;
  if (steps.rbegin()->second.dim() != ambient) {
    throw std::invalid_argument("weight filtration must end at the full space");
  }
  std::vector<Subspace<Rat>> dense;
  Subspace<Rat> prev = Subspace<Rat>::zero(ambient);
  for (int k = klo; k <= khi; ++k) {
    auto it = steps.find(k);
    Subspace<Rat> cur = it == steps.end() ? prev : it->second;
    if (!cur.contains(prev)) throw std::invalid_argument("weight filtration must be increasing");
    dense.push_back(cur);
    prev = cur;
  }
  int first = 0;
  while (first < static_cast<int>(dense.size()) && dense[static_cast<std::size_t>(first)].dim() == 0) {
    ++first;
  }
  if (first == static_cast<int>(dense.size())) {
    throw std::invalid_argument("weight filtration never reaches the full space");
  }
  int last = static_cast<int>(dense.size()) - 1;
  while (last > first && dense[static_cast<std::size_t>(last - 1)].dim() == ambient) --last;
  out.lo = klo + first;
  out.w.assign(dense.begin() + first, dense.begin() + last + 1);
  return out;
}

HodgeFiltration HodgeFiltration::from_steps(const std::map<int, Subspace<GaussRat>>& steps,
                                            int ambient) {
  if (steps.empty()) throw std::invalid_argument("hodge filtration needs at least one step");
  HodgeFiltration out;
  const int plo = steps.begin()->first;
  const int phi = steps.rbegin()->first;
  std::vector<Subspace<GaussRat>> dense;
  Subspace<GaussRat> prev = Subspace<GaussRat>::full(ambient);
  for (int p = plo; p <= phi; ++p) {
    auto it = steps.find(p);
    Subspace<GaussRat> cur = it == steps.end() ? prev : it->second;
    if (!prev.contains(cur)) throw std::invalid_argument("hodge filtration must be decreasing");
    dense.push_back(cur);
    prev = cur;
  }
  int first = 0;
  while (first + 1 < static_cast<int>(dense.size()) &&
         dense[static_cast<std::size_t>(first + 1)].dim() == ambient) {
    ++first;
  }
  int last = static_cast<int>(dense.size()) - 1;
  while (last > first && dense[static_cast<std::size_t>(last)].dim() == 0) --last;
  out.lo = plo + first;
  out.f.assign(dense.begin() + first, dense.begin() + last + 1);
  if (out.f.empty()) throw std::invalid_argument("hodge filtration is empty");
  return out;
}

void HodgeFiltration::validate(const SymplecticLattice& lattice) const {
  const int l = lattice.weight;
  for (int p = 0; p <= l; ++p) {
    if (at(p).dim() != lattice.expected_filtration_dim(p)) {
      throw std::invalid_argument("hodge filtration step F^" + std::to_string(p) +
                                  " has dimension " + std::to_string(at(p).dim()) +
                                  ", expected " + std::to_string(lattice.expected_filtration_dim(p)));
    }
  }
  Mat<GaussRat> qc = promote(lattice.Q);
  for (int p = 0; p <= l + 1; ++p) {
    Mat<GaussRat> pairing = at(p).basis * qc * at(l + 1 - p).basis.transpose();
    if (!pairing.is_zero()) {
      throw std::invalid_argument("hodge filtration violates isotropy Q(F^" + std::to_string(p) +
                                  ", F^" + std::to_string(l + 1 - p) + ") = 0");
    }
  }
}

void NilpotentCone::validate(const Mat<Rat>* q) const {
  if (generators.empty()) throw std::invalid_argument("cone needs at least one generator");
  const int n = generators.front().rows;
  for (const Mat<Rat>& g : generators) {
    if (g.rows != n || g.cols != n) throw std::invalid_argument("generator size mismatch");
    if (!mat_is_nilpotent(g)) throw std::invalid_argument("generator is not nilpotent");
    if (q != nullptr && !in_symplectic_lie_algebra(g, *q)) {
      throw std::invalid_argument("generator is not infinitesimally form-compatible");
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (!commute(generators[i], generators[j])) {
        throw std::invalid_argument("generators " + std::to_string(i) + " and " +
                                    std::to_string(j) + " do not commute");
      }
    }
  }
  // Zero generators are allowed (they name the apex; alone they give the
  // zero cone); the nonzero ones must be linearly independent.
  std::vector<const Mat<Rat>*> nonzero;
  for (const Mat<Rat>& g : generators) {
    if (!g.is_zero()) nonzero.push_back(&g);
  }
  Mat<Rat> flat(static_cast<int>(nonzero.size()), n * n);
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    for (int k = 0; k < n * n; ++k) {
      flat.at(static_cast<int>(i), k) = nonzero[i]->a[static_cast<std::size_t>(k)];
    }
  }
  if (mat_rank(flat) != static_cast<int>(nonzero.size())) {
    throw std::invalid_argument("generators are linearly dependent");
  }
}

Mat<Rat> NilpotentCone::interior_point() const {
  if (generators.empty()) throw std::invalid_argument("cone needs at least one generator");
  Mat<Rat> s = generators.front();
  for (std::size_t i = 1; i < generators.size(); ++i) s = s + generators[i];
  return s;
}

WeightFiltration jm_weight_filtration(const Mat<Rat>& n) {
  if (!n.is_square()) throw std::invalid_argument("weight filtration of non-square matrix");
  const int dim = n.rows;
  const int mu = nilpotency_index(n);
  std::vector<Mat<Rat>> powers;  // powers[j] = n^j, j = 0..mu+1
  powers.push_back(Mat<Rat>::identity(dim));
  for (int j = 1; j <= mu + 1; ++j) powers.push_back(powers.back() * n);
  std::vector<Subspace<Rat>> img(static_cast<std::size_t>(mu + 2));
  std::vector<Subspace<Rat>> ker(static_cast<std::size_t>(mu + 2));
  for (int j = 0; j <= mu + 1; ++j) {
    img[static_cast<std::size_t>(j)] = image_subspace(powers[static_cast<std::size_t>(j)]);
    ker[static_cast<std::size_t>(j)] = kernel_subspace(powers[static_cast<std::size_t>(j)]);
  }
  std::map<int, Subspace<Rat>> steps;
  for (int k = -mu - 1; k <= mu; ++k) {
    Subspace<Rat> wk = Subspace<Rat>::zero(dim);
    for (int j = 0; j <= mu; ++j) {
      int e = j + k + 1;
      if (e <= 0) continue;  // ker(n^e) = 0 contributes nothing
      Subspace<Rat> kere = e > mu + 1 ? Subspace<Rat>::full(dim) : ker[static_cast<std::size_t>(e)];
      wk = sum(wk, intersect(img[static_cast<std::size_t>(j)], kere));
    }
    steps[k] = wk;
  }
  return WeightFiltration::from_steps(0, steps, dim);
}

WeightFiltration cone_weight_filtration(const NilpotentCone& cone, std::uint64_t seed,
                                        int samples) {
  cone.validate();
  WeightFiltration base = jm_weight_filtration(cone.interior_point());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 9);
  std::uniform_int_distribution<int> den(1, 4);
  for (int s = 0; s < samples; ++s) {
    Mat<Rat> pt(cone.ambient(), cone.ambient());
    for (const Mat<Rat>& g : cone.generators) {
      Rat c(num(rng), den(rng));
      c.canonicalize();
      pt = pt + c * g;
    }
    WeightFiltration other = jm_weight_filtration(pt);
    if (other != base) {
      throw InteriorDisagreementError(
          "interior points of the cone disagree on the weight filtration (sample " +
          std::to_string(s) + "); the cone cannot underlie a nilpotent orbit");
    }
  }
  return base;
}

WeightFiltration transport(const Mat<Rat>& g, const WeightFiltration& w) {
  WeightFiltration out = w;
  for (Subspace<Rat>& s : out.w) s = apply_map(g, s);
  return out;
}

HodgeFiltration transport(const Mat<Rat>& g, const HodgeFiltration& f) {
  HodgeFiltration out = f;
  Mat<GaussRat> gc = promote(g);
  for (Subspace<GaussRat>& s : out.f) s = apply_map(gc, s);
  return out;
}

}  // namespace hodgefan
