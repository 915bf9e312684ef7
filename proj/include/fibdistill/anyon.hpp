#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace fibdistill {

using Complex = std::complex<double>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Charge labels of the Fibonacci model. The fusion table is hard-coded:
// 1x1=1, 1xt=tx1=t, txt=1+t.
enum class Label : std::uint8_t { trivial = 0, tau = 1 };

inline char label_char(Label l) { return l == Label::trivial ? '1' : 't'; }

// True if c is an admissible fusion outcome of a x b.
inline bool fusion_allowed(Label a, Label b, Label c) {
  if (a == Label::trivial) return c == b;
  if (b == Label::trivial) return c == a;
  return true;  // t x t = 1 + t
}

// Numerical constants every braid matrix is built from.  fMatrix is the
// recoupling matrix on the two-channel space, rPhase* are the exchange
// phases in the two fusion channels, bubble is the loop value of a single
// tau ring (kept only for independent diagram cross-checks).
struct ModelConstants {
  double phi;
  Eigen::Matrix2d fMatrix;
  Complex rPhaseCharge1;
  Complex rPhaseChargeTau;
  double bubble;
};

const ModelConstants& model_constants();

// One labeled fusion path in the left-to-right (caterpillar) tree:
// x0 --l1-- x1 --l2-- x2 ... with x0 fixed to the trivial charge and
// every step admissible.  xN is the path's total charge.
struct FusionPath {
  std::vector<Label> leafLabels;          // length N
  std::vector<Label> intermediateCharges; // length N+1, x0..xN

  bool operator==(const FusionPath& o) const {
    return leafLabels == o.leafLabels &&
           intermediateCharges == o.intermediateCharges;
  }
};

// Bit-packs a path into one 64-bit key: leaves in the low half, charges in
// the high half.  Requires N <= 31.
std::uint64_t pack_path(const FusionPath& p);

// Ordered basis of all admissible paths for N dots with a fixed total
// charge, optionally restricted to one leaf labeling.  Order is
// lexicographic in (leafLabels, intermediateCharges) with trivial < tau,
// and is identical across runs.
class FusionPathBasis {
 public:
  FusionPathBasis(int n, Label totalCharge, std::vector<FusionPath> paths);

  int dot_count() const { return n_; }
  Label total_charge() const { return totalCharge_; }
  std::size_t size() const { return paths_.size(); }
  const FusionPath& path(std::size_t i) const { return paths_[i]; }
  const std::vector<FusionPath>& paths() const { return paths_; }

  // Position of a path in the basis, or nullopt if absent.
  std::optional<std::size_t> find(const FusionPath& p) const;
  std::optional<std::size_t> find_packed(std::uint64_t key) const;

  // One path per line: leaf labels then intermediate charges, written with
  // the symbols "1" and "t", single spaces between columns.
  std::string dump() const;

  bool same_basis(const FusionPathBasis& o) const;

 private:
  int n_;
  Label totalCharge_;
  std::vector<FusionPath> paths_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const FusionPathBasis>;

// All admissible paths for n dots and the given total charge, filtered by
// an optional fixed leaf labeling.  Degenerate inputs give empty bases.
BasisPtr enumerate_basis(int n, Label totalCharge,
                         const std::optional<std::vector<Label>>& leafConstraint =
                             std::nullopt);

// Dimension of the charge-trivial space of n tau-dots, evaluated from the
// closed-form expression (phi^(n-1) - (-1/phi)^(n-1)) / sqrt(5) and rounded
// to the nearest integer.
long fib_dimension(int n);

}  // namespace fibdistill
