#pragma once

#include <optional>
#include <vector>

#include "fibdistill/anyon.hpp"

namespace fibdistill {

// One elementary crossing: strands index and index+1 exchange, with
// sign +1 for the positive crossing and -1 for its inverse.
struct Crossing {
  int index;  // 1-based, in [1, strandCount-1]
  int sign;   // +1 or -1

  bool operator==(const Crossing& o) const {
    return index == o.index && sign == o.sign;
  }
};

struct BraidWord {
  int strandCount = 0;
  std::vector<Crossing> crossings;

  std::size_t length() const { return crossings.size(); }
  void push(int index, int sign) { crossings.push_back({index, sign}); }

  bool operator==(const BraidWord& o) const {
    return strandCount == o.strandCount && crossings == o.crossings;
  }
};

// Validates strand count and crossing ranges; throws on violation.
void check_word(const BraidWord& word);

// Reversed word with every sign flipped; exact group inverse.
BraidWord inverse_word(const BraidWord& word);

// a followed by b; strand counts must match.
BraidWord concat_words(const BraidWord& a, const BraidWord& b);

// Removes adjacent crossing/inverse pairs until none remain.  This is a
// plain free reduction: the represented group element, the induced
// permutation, and any warp trajectory endpoints are unchanged.
BraidWord free_reduce(const BraidWord& word);

// Endpoint permutation of the strands, ignoring crossing signs.
// perm[i] = final position (1-based) of the strand starting at i+1.
std::vector<int> induced_permutation(const BraidWord& word);

bool is_purebraid(const BraidWord& word);

// Position of the warp strand after each crossing, starting with
// warpStart itself.  Absent if some crossing does not involve the warp's
// current position (the word is then not a weave for this warp).
std::optional<std::vector<int>> weave_trajectory(const BraidWord& word,
                                                 int warpStart);

struct StateVector {
  BasisPtr basis;
  Eigen::VectorXcd amplitudes;
};

struct SectorUnitary {
  BasisPtr basis;
  Eigen::MatrixXcd matrix;
};

// Matrix of one crossing on the given basis.  Per path the action only
// touches the local data (x_{i-1}, l_i, l_{i+1}, x_{i+1}):
//   - a trivial leaf on either side: the leaves swap and x_i reroutes to
//     the unique admissible value, amplitude exactly 1;
//   - two tau leaves with the pair channel forced: a diagonal phase,
//     rPhaseCharge1 if x_{i-1} = x_{i+1}, else rPhaseChargeTau;
//   - two tau leaves with x_{i-1} = x_{i+1} = tau: the 2x2 block
//     F * diag(rPhaseCharge1, rPhaseChargeTau) * F on the x_i choice.
// Negative sign conjugates the phases.  Throws if the basis is not closed
// under the action (use an all-tau or unconstrained-leaf basis).
SectorUnitary generator_matrix(const BasisPtr& basis, int index, int sign);

// Applies the word's crossings left to right.  The state's basis must be
// closed under every crossing (leaf-swap targets must exist in it).
StateVector apply_word(const BraidWord& word, const StateVector& state);

// Full matrix of the word on a basis, built column by column.  jobs > 1
// splits the columns across threads; the result is identical either way.
SectorUnitary word_unitary(const BraidWord& word, const BasisPtr& basis,
                           int jobs = 1);

// min over a unit phase of the operator norm of (U - phase*V).  Computed
// from the eigenphases of U^dag V: the minimum equals 2*sin(w/4) where w
// is the width of the smallest arc containing all eigenphases.
double projective_distance(const SectorUnitary& u, const SectorUnitary& v);
double projective_distance(const Eigen::MatrixXcd& u,
                           const Eigen::MatrixXcd& v);

}  // namespace fibdistill
