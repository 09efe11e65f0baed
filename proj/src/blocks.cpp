#include "qfock/blocks.hpp"

#include "qfock/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfock {

namespace {

MultisetClass minus_letter(const MultisetClass& alpha, int letter) {
  MultisetClass sub = alpha;
  --sub.counts[static_cast<std::size_t>(letter - 1)];
  return sub;
}

}  // namespace

BlockTower::BlockTower(int d, double q, double tol) : d_(d), q_(q), tol_(tol) {
  detail::check_dimension(d);
  if (!(std::fabs(q) < 1.0)) throw std::invalid_argument("|q| must be < 1");
}

BlockTower::Node& BlockTower::node(const MultisetClass& alpha) {
  if (static_cast<int>(alpha.counts.size()) != d_) throw std::invalid_argument("class has wrong number of letters");
  auto it = nodes_.find(alpha.counts);
  if (it != nodes_.end()) return *it->second;
  auto fresh = std::make_unique<Node>(Node{WordSpace::block(d_, alpha), {}, {}, {}, {}, {}});
  peak_dim_ = std::max(peak_dim_, fresh->space.dim());
  auto [pos, inserted] = nodes_.emplace(alpha.counts, std::move(fresh));
  return *pos->second;
}

std::vector<Child> BlockTower::first_letter_children(const MultisetClass& alpha,
                                                      const Matrix& (BlockTower::*get)(const MultisetClass&)) {
  std::vector<Child> children(static_cast<std::size_t>(d_));
  for (int a = 1; a <= d_; ++a) {
    if (alpha.counts[static_cast<std::size_t>(a - 1)] == 0) continue;
    const MultisetClass sub = minus_letter(alpha, a);
    const Matrix& mat = (this->*get)(sub);
    children[static_cast<std::size_t>(a - 1)] = Child{&node(sub).space, &mat};
  }
  return children;
}

const WordSpace& BlockTower::space(const MultisetClass& alpha) { return node(alpha).space; }

const Matrix& BlockTower::gram(const MultisetClass& alpha) {
  Node& nd = node(alpha);
  if (!nd.gram) {
    auto children = first_letter_children(alpha, &BlockTower::gram);
    nd.gram = gram_step(nd.space, children, q_);
    entries_ += nd.gram->size();
  }
  return *nd.gram;
}

const Matrix& BlockTower::cycle_sum(const MultisetClass& alpha) {
  Node& nd = node(alpha);
  if (!nd.m) {
    nd.m = cycle_sum_on(nd.space, q_);
    entries_ += nd.m->size();
  }
  return *nd.m;
}

const Vector& BlockTower::m_eigenvalues(const MultisetClass& alpha) {
  Node& nd = node(alpha);
  if (!nd.eig) {
    nd.eig = m_eigenvalues_from(gram(alpha), cycle_sum(alpha));
  }
  return *nd.eig;
}

const Matrix& BlockTower::m_sqrt(const MultisetClass& alpha) {
  Node& nd = node(alpha);
  if (!nd.m_sqrt) {
    MSqrt ms = m_sqrt_from(gram(alpha), cycle_sum(alpha), tol_);
    nd.m_sqrt = std::move(ms.m_sqrt);
    if (!nd.eig) nd.eig = std::move(ms.eigenvalues);
  }
  return *nd.m_sqrt;
}

const Matrix& BlockTower::u(const MultisetClass& alpha) {
  Node& nd = node(alpha);
  if (!nd.ur) {
    const Matrix& root = m_sqrt(alpha);
    auto children = first_letter_children(alpha, &BlockTower::u);
    nd.ur = ur_from(nd.space, children, root);
  }
  return nd.ur->u;
}

const Matrix& BlockTower::r(const MultisetClass& alpha) {
  u(alpha);
  return node(alpha).ur->r;
}

double BlockTower::level_alpha(int n) {
  if (n < 1) throw std::invalid_argument("level_alpha needs n >= 1");
  double best = INFINITY;
  for (const MultisetClass& alpha : multiset_classes(d_, n)) best = std::min(best, m_eigenvalues(alpha)(0));
  return best;
}

double BlockTower::iterate_distance(int n) {
  if (n < 1) throw std::invalid_argument("iterate_distance needs n >= 1");
  double worst = 0.0;
  for (const MultisetClass& beta : multiset_classes(d_, n + 1)) {
    const Matrix& r_next = r(beta);
    std::vector<Child> last(static_cast<std::size_t>(d_));
    for (int a = 1; a <= d_; ++a) {
      if (beta.counts[static_cast<std::size_t>(a - 1)] == 0) continue;
      const MultisetClass sub = minus_letter(beta, a);
      const Matrix& r_sub = r(sub);
      last[static_cast<std::size_t>(a - 1)] = Child{&node(sub).space, &r_sub};
    }
    const Matrix lifted = tensor_identity_on(node(beta).space, last);
    worst = std::max(worst, linalg::op_norm_sym(lifted - r_next));
  }
  return worst;
}

}  // namespace qfock
