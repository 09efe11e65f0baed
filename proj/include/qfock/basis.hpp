#pragma once

// Natural basis of the untwisted Fock space: words over {1..d}, their
// lexicographic indexing, the letter-count (multiset) blocks, and the 0/1
// matrices of the annihilation operators V_i.

#include "qfock/types.hpp"

#include <compare>
#include <span>
#include <vector>

namespace qfock {

/// A basis tensor xi_{i1} (x) ... (x) xi_{in}, letters stored in reading order.
/// The empty word is the vacuum.
struct Word {
  std::vector<int> letters;

  int size() const { return static_cast<int>(letters.size()); }
  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;
};

/// Letter counts (alpha_1, ..., alpha_d) of a word.
struct MultisetClass {
  std::vector<int> counts;

  int level() const;
  /// n! / (alpha_1! ... alpha_d!)
  Index dimension() const;
  auto operator<=>(const MultisetClass&) const = default;
  bool operator==(const MultisetClass&) const = default;
};

/// All d^n words of length n in increasing lexicographic order.
std::vector<Word> enumerate_words(int d, int n);

/// 0-based position of `w` in enumerate_words(d, |w|).
Index word_index(const Word& w, int d);

/// Inverse of word_index.
Word word_at(Index index, int d, int n);

MultisetClass multiset_class(const Word& w, int d);

/// Every class of level n, ordered by its lexicographically smallest member
/// (equivalently, by decreasing lexicographic order of the count vectors).
std::vector<MultisetClass> multiset_classes(int d, int n);

/// Words of class `alpha`, lexicographic order.
std::vector<Word> block_members(int d, int n, const MultisetClass& alpha);

/// word_index of each member of block_members(d, n, alpha), increasing.
std::vector<Index> block_member_indices(int d, int n, const MultisetClass& alpha);

/// Matrix of V_i : V_n -> V_{n-1}. Entries are exactly 0 or 1. n >= 1.
LevelMatrix annihilator_matrix(int i, int d, int n);

/// Matrix of V_i^* : V_{n-1} -> V_n, the transpose of annihilator_matrix.
LevelMatrix creator_matrix(int i, int d, int n);

namespace detail {

void check_dimension(int d);
void check_level(int n);

/// Letters (1-based) of the word with the given index.
void decode(Index index, int d, std::span<int> letters);
Index encode(std::span<const int> letters, int d);

}  // namespace detail

}  // namespace qfock
