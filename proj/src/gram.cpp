#include "qfock/gram.hpp"

#include "qfock/blocks.hpp"
#include "qfock/symgroup.hpp"
#include "qfock/tower.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfock {

namespace {

void check_q(double q) {
  if (!(std::fabs(q) < 1.0)) throw std::invalid_argument("|q| must be < 1, got " + std::to_string(q));
}

double q_inner_rec(std::span<const int> u, std::vector<int>& w, double q) {
  if (u.empty()) return 1.0;
  double sum = 0.0;
  double coeff = 1.0;
  const int head = u[0];
  for (std::size_t k = 0; k < w.size(); ++k, coeff *= q) {
    if (w[k] != head) continue;
    std::vector<int> rest;
    rest.reserve(w.size() - 1);
    rest.insert(rest.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
    rest.insert(rest.end(), w.begin() + static_cast<std::ptrdiff_t>(k) + 1, w.end());
    sum += coeff * q_inner_rec(u.subspan(1), rest, q);
  }
  return sum;
}

}  // namespace

double q_inner(const Word& u, const Word& w, double q) {
  check_q(q);
  if (u.size() != w.size()) return 0.0;
  std::vector<int> ww = w.letters;
  return q_inner_rec(u.letters, ww, q);
}

std::vector<GramMatrix> gram_tower(int d, int n_max, double q) {
  detail::check_dimension(d);
  detail::check_level(n_max);
  check_q(q);
  std::vector<WordSpace> spaces;
  std::vector<GramMatrix> out;
  spaces.reserve(static_cast<std::size_t>(n_max) + 1);
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    spaces.push_back(WordSpace::full_level(d, n));
    std::vector<Child> children;
    if (n > 0) children.assign(static_cast<std::size_t>(d), Child{&spaces[static_cast<std::size_t>(n - 1)], &out.back().mat});
    out.push_back(GramMatrix{d, n, q, gram_step(spaces.back(), children, q)});
  }
  return out;
}

GramMatrix gram_by_recursion(int d, int n, double q) {
  auto tower = gram_tower(d, n, q);
  return std::move(tower.back());
}

GramMatrix gram_by_inversions(int d, int n, double q, int cap) {
  detail::check_dimension(d);
  detail::check_level(n);
  check_q(q);
  if (n > cap) throw std::invalid_argument("gram_by_inversions: n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  const Index dim = ipow(d, n);
  GramMatrix g{d, n, q, Matrix::Zero(dim, dim)};
  for (const Permutation& s : all_permutations(n)) {
    const double coeff = std::pow(q, s.inversions());
    // pi(s) has a single 1 per column.
    for (Index w = 0; w < dim; ++w) g.mat(permute_word_index(s, w, d), w) += coeff;
  }
  return g;
}

Matrix gram_block(int d, int n, double q, const MultisetClass& alpha) {
  check_q(q);
  if (alpha.level() != n) throw std::invalid_argument("class level differs from n");
  BlockTower tower(d, q);
  return tower.gram(alpha);
}

}  // namespace qfock
