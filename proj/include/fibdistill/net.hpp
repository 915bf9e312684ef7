#pragma once

#include <cstdint>
#include <vector>

#include "fibdistill/braid.hpp"

namespace fibdistill {

// Unit quaternion <-> SU(2), used for fast products and distance scans in
// the net and the commutator recursion.  Convention:
//   U(q) = w*I - i*(x*sx + y*sy + z*sz)   (sx, sy, sz the Pauli matrices)
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
};

Quat quat_mul(const Quat& a, const Quat& b);
Quat quat_conj(const Quat& q);
double quat_dot(const Quat& a, const Quat& b);
Quat quat_normalize(const Quat& q);
Quat quat_rotation(const double axis[3], double angle);

// Rotation angle in [0, pi] and unit axis; sign-canonicalizes first.
// Near the identity the axis defaults to +x.
void quat_axis_angle(const Quat& q, double axis[3], double& angle);

Eigen::Matrix2cd su2_from_quat(const Quat& q);

// Divides by a square root of det(U), giving an SU(2) representative of
// the projective class, and extracts its quaternion.
Quat quat_from_unitary(const Eigen::Matrix2cd& u);

// Projective distance between the rotations of two unit quaternions;
// equals projective_distance of the corresponding 2x2 unitaries.
double quat_proj_distance(const Quat& a, const Quat& b);

// Generating sets the net enumerates over.  Both keep their structural
// property closed under concatenation and inverse:
//   purebraid4: the six band generators a_jk (conjugated squares) on four
//     strands plus inverses; every product is a purebraid.
//   weave3: sigma_1^{+-2} and sigma_2^{+-2} on three strands, read with
//     the warp strand at position 2; every product is a weave that starts
//     and ends at position 2.
enum class NetConstraint { purebraid4, weave3 };

struct NetSymbol {
  BraidWord word;
  Quat image;
  int inverseId;
};

// Fully materialized view of one entry: the crossing-level word and its
// simulated sector unitary.
struct NetEntry {
  BraidWord word;
  SectorUnitary image;
  std::uint64_t key;
};

struct NetParameters {
  int maxBaseLength = 0;        // in symbols of the generating set
  double cellSize = 0.02;       // axis-angle dedup grid resolution
  std::size_t entryCap = 4'000'000;
};

// Breadth-first net over the constrained generating set, deduplicated on a
// quantized axis-angle grid: the first (hence shortest, and within a level
// lexicographically first) word per cell is kept.
class BraidNet {
 public:
  BraidNet(BasisPtr basis, NetConstraint constraint, NetParameters params);

  const BasisPtr& basis() const { return basis_; }
  NetConstraint constraint() const { return constraint_; }
  const NetParameters& params() const { return params_; }
  const std::vector<NetSymbol>& symbols() const { return symbols_; }
  std::size_t size() const { return entries_.size(); }

  struct Lookup {
    std::size_t entryId;
    double distance;
  };
  // Linear scan for the entry nearest to q in projective distance.
  Lookup nearest(const Quat& q) const;

  std::vector<int> entry_symbols(std::size_t id) const;
  Quat entry_quat(std::size_t id) const;
  std::size_t entry_crossing_length(std::size_t id) const;
  std::uint64_t entry_key(std::size_t id) const;
  BraidWord entry_word(std::size_t id) const;

  // Entry with the word expanded and its image recomputed by simulation.
  NetEntry materialize(std::size_t id) const;

  // Largest crossing count over all entries (enters the recursion length
  // bound 5*len(d-1) + 4*maxlen).
  std::size_t max_entry_crossing_length() const { return maxCrossLen_; }

  // Expands a symbol-id sequence into a braid word.
  BraidWord expand_symbols(const std::vector<int>& syms) const;

 private:
  struct Packed {
    double q[4];
    std::uint64_t code;      // up to 16 symbol ids, 4 bits each
    std::uint32_t crossLen;  // expanded crossing count, unreduced
    std::uint8_t symLen;
  };

  void build();
  std::uint64_t cell_key(const Quat& q) const;

  BasisPtr basis_;
  NetConstraint constraint_;
  NetParameters params_;
  std::vector<NetSymbol> symbols_;
  std::vector<Packed> entries_;
  std::size_t maxCrossLen_ = 0;
};

}  // namespace fibdistill
