#include "qfock/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qfock {

void Config::validate() const {
  if (d < 2) throw std::invalid_argument("d must be >= 2, got " + std::to_string(d));
  if (!(std::fabs(q) < 1.0)) throw std::invalid_argument("|q| must be < 1, got " + std::to_string(q));
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1, got " + std::to_string(n_max));
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

Index ipow(int d, int n) {
  Index r = 1;
  for (int k = 0; k < n; ++k) {
    if (r > (Index{1} << 62) / d) throw std::overflow_error("d^n overflows 64-bit index");
    r *= d;
  }
  return r;
}

namespace detail {

void check_dimension(int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2, got " + std::to_string(d));
}

void check_level(int n) {
  if (n < 0) throw std::invalid_argument("level must be >= 0, got " + std::to_string(n));
}

void decode(Index index, int d, std::span<int> letters) {
  for (auto k = static_cast<std::ptrdiff_t>(letters.size()) - 1; k >= 0; --k) {
    letters[static_cast<std::size_t>(k)] = static_cast<int>(index % d) + 1;
    index /= d;
  }
}

Index encode(std::span<const int> letters, int d) {
  Index idx = 0;
  for (int l : letters) idx = idx * d + (l - 1);
  return idx;
}

}  // namespace detail

int MultisetClass::level() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Index MultisetClass::dimension() const {
  // Product of binomials, exact in integers.
  Index dim = 1;
  int placed = 0;
  for (int c : counts) {
    for (int j = 1; j <= c; ++j) {
      dim = dim * (placed + j) / j;
    }
    placed += c;
  }
  return dim;
}

std::vector<Word> enumerate_words(int d, int n) {
  detail::check_dimension(d);
  detail::check_level(n);
  const Index count = ipow(d, n);
  std::vector<Word> out(static_cast<std::size_t>(count));
  for (Index idx = 0; idx < count; ++idx) {
    auto& w = out[static_cast<std::size_t>(idx)].letters;
    w.resize(static_cast<std::size_t>(n));
    detail::decode(idx, d, w);
  }
  return out;
}

Index word_index(const Word& w, int d) {
  detail::check_dimension(d);
  for (int l : w.letters) {
    if (l < 1 || l > d) {
      throw std::invalid_argument("letter " + std::to_string(l) + " out of range [1, " + std::to_string(d) + "]");
    }
  }
  return detail::encode(w.letters, d);
}

Word word_at(Index index, int d, int n) {
  detail::check_dimension(d);
  detail::check_level(n);
  if (index < 0 || index >= ipow(d, n)) throw std::out_of_range("word index out of range");
  Word w;
  w.letters.resize(static_cast<std::size_t>(n));
  detail::decode(index, d, w.letters);
  return w;
}

MultisetClass multiset_class(const Word& w, int d) {
  detail::check_dimension(d);
  MultisetClass c{std::vector<int>(static_cast<std::size_t>(d), 0)};
  for (int l : w.letters) {
    if (l < 1 || l > d) throw std::invalid_argument("letter out of range");
    ++c.counts[static_cast<std::size_t>(l - 1)];
  }
  return c;
}

namespace {

void compositions(int remaining, std::size_t slot, std::vector<int>& cur, std::vector<MultisetClass>& out) {
  if (slot + 1 == cur.size()) {
    cur[slot] = remaining;
    out.push_back(MultisetClass{cur});
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    cur[slot] = c;
    compositions(remaining - c, slot + 1, cur, out);
  }
}

void check_class(int d, int n, const MultisetClass& alpha) {
  if (static_cast<int>(alpha.counts.size()) != d) throw std::invalid_argument("class has wrong number of letters");
  for (int c : alpha.counts) {
    if (c < 0) throw std::invalid_argument("negative letter count");
  }
  if (alpha.level() != n) {
    throw std::invalid_argument("class level " + std::to_string(alpha.level()) + " differs from n = " + std::to_string(n));
  }
}

}  // namespace

std::vector<MultisetClass> multiset_classes(int d, int n) {
  detail::check_dimension(d);
  detail::check_level(n);
  std::vector<MultisetClass> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  compositions(n, 0, cur, out);
  return out;
}

std::vector<Word> block_members(int d, int n, const MultisetClass& alpha) {
  std::vector<Word> out;
  for (Index idx : block_member_indices(d, n, alpha)) out.push_back(word_at(idx, d, n));
  return out;
}

std::vector<Index> block_member_indices(int d, int n, const MultisetClass& alpha) {
  detail::check_dimension(d);
  detail::check_level(n);
  check_class(d, n, alpha);
  // Multiset permutations in lexicographic order, starting from the sorted word.
  std::vector<int> letters;
  for (int l = 1; l <= d; ++l) letters.insert(letters.end(), static_cast<std::size_t>(alpha.counts[static_cast<std::size_t>(l - 1)]), l);
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(alpha.dimension()));
  do {
    out.push_back(detail::encode(letters, d));
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

LevelMatrix annihilator_matrix(int i, int d, int n) {
  detail::check_dimension(d);
  if (i < 1 || i > d) throw std::invalid_argument("annihilator index out of range");
  if (n < 1) throw std::invalid_argument("annihilator needs level n >= 1");
  const Index rows = ipow(d, n - 1);
  LevelMatrix v{d, 0.0, n, n - 1, Basis::orthonormal, Basis::orthonormal, Matrix::Zero(rows, rows * d)};
  // Words starting with letter i occupy the contiguous column range [(i-1) d^{n-1}, i d^{n-1}).
  for (Index r = 0; r < rows; ++r) v.mat(r, (i - 1) * rows + r) = 1.0;
  return v;
}

LevelMatrix creator_matrix(int i, int d, int n) {
  LevelMatrix v = annihilator_matrix(i, d, n);
  std::swap(v.domain_level, v.codomain_level);
  v.mat.transposeInPlace();
  return v;
}

}  // namespace qfock
