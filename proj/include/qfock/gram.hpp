#pragma once

// Gram matrices Gamma_n of the q-inner product in the natural word basis.
//
// gram_by_recursion is the production route. q_inner and gram_by_inversions are
// independent reference constructions kept for verification.

#include "qfock/basis.hpp"
#include "qfock/types.hpp"

#include <vector>

namespace qfock {

struct GramMatrix {
  int d = 2;
  int level = 0;
  double q = 0.0;
  Matrix mat;
};

/// <u | w>_q by the first-letter recursion; 0 when the lengths differ.
double q_inner(const Word& u, const Word& w, double q);

/// Gamma_n = diag(Gamma_{n-1}, ..., Gamma_{n-1}) [M_n], Gamma_0 = [1].
GramMatrix gram_by_recursion(int d, int n, double q);

/// Gamma_0, ..., Gamma_{n_max} from one pass of the recursion.
std::vector<GramMatrix> gram_tower(int d, int n_max, double q);

/// sum over S_n of q^{inv(s)} pi(s). Costs n! d^n; refuses n > cap.
GramMatrix gram_by_inversions(int d, int n, double q, int cap = 6);

/// Gamma restricted to the words of class alpha (lexicographic order), built by
/// the block recursion without forming Gamma_n.
Matrix gram_block(int d, int n, double q, const MultisetClass& alpha);

}  // namespace qfock
