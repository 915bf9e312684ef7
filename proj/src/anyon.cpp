#include "fibdistill/anyon.hpp"

#include <cmath>
#include <sstream>

namespace fibdistill {

const ModelConstants& model_constants() {
  static const ModelConstants c = [] {
    ModelConstants m;
    m.phi = (std::sqrt(5.0) + 1.0) / 2.0;
    const double s = 1.0 / std::sqrt(m.phi);
    m.fMatrix << 1.0 / m.phi, s, s, -1.0 / m.phi;
    m.rPhaseCharge1 = std::polar(1.0, -4.0 * M_PI / 5.0);
    m.rPhaseChargeTau = std::polar(1.0, 3.0 * M_PI / 5.0);
    m.bubble = m.phi;
    return m;
  }();
  return c;
}

std::uint64_t pack_path(const FusionPath& p) {
  const std::size_t n = p.leafLabels.size();
  if (n > 31 || p.intermediateCharges.size() != n + 1)
    throw Error("pack_path: path too long or malformed");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (p.leafLabels[i] == Label::tau) key |= (1ull << i);
  for (std::size_t i = 0; i <= n; ++i)
    if (p.intermediateCharges[i] == Label::tau) key |= (1ull << (32 + i));
  return key;
}

FusionPathBasis::FusionPathBasis(int n, Label totalCharge,
                                 std::vector<FusionPath> paths)
    : n_(n), totalCharge_(totalCharge), paths_(std::move(paths)) {
  index_.reserve(paths_.size() * 2);
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    auto [it, fresh] = index_.emplace(pack_path(paths_[i]), i);
    if (!fresh) throw Error("FusionPathBasis: duplicate path");
  }
}

std::optional<std::size_t> FusionPathBasis::find(const FusionPath& p) const {
  return find_packed(pack_path(p));
}

std::optional<std::size_t> FusionPathBasis::find_packed(
    std::uint64_t key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string FusionPathBasis::dump() const {
  std::ostringstream out;
  for (const FusionPath& p : paths_) {
    bool first = true;
    for (Label l : p.leafLabels) {
      if (!first) out << ' ';
      out << label_char(l);
      first = false;
    }
    for (Label x : p.intermediateCharges) {
      if (!first) out << ' ';
      out << label_char(x);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

bool FusionPathBasis::same_basis(const FusionPathBasis& o) const {
  if (this == &o) return true;
  return n_ == o.n_ && totalCharge_ == o.totalCharge_ && paths_ == o.paths_;
}

namespace {

// Depth-first enumeration in lexicographic order: leaves outer, charges
// inner, trivial before tau at every choice point.
void extend_charges(const std::vector<Label>& leaves, Label totalCharge,
                    std::vector<Label>& charges,
                    std::vector<FusionPath>& out) {
  const std::size_t n = leaves.size();
  const std::size_t i = charges.size() - 1;  // next leaf to absorb
  if (i == n) {
    if (charges.back() == totalCharge)
      out.push_back(FusionPath{leaves, charges});
    return;
  }
  for (Label x : {Label::trivial, Label::tau}) {
    if (!fusion_allowed(charges.back(), leaves[i], x)) continue;
    charges.push_back(x);
    extend_charges(leaves, totalCharge, charges, out);
    charges.pop_back();
  }
}

void enumerate_leaves(int n, Label totalCharge, std::vector<Label>& leaves,
                      std::vector<FusionPath>& out) {
  if (static_cast<int>(leaves.size()) == n) {
    std::vector<Label> charges{Label::trivial};
    charges.reserve(n + 1);
    extend_charges(leaves, totalCharge, charges, out);
    return;
  }
  for (Label l : {Label::trivial, Label::tau}) {
    leaves.push_back(l);
    enumerate_leaves(n, totalCharge, leaves, out);
    leaves.pop_back();
  }
}

}  // namespace

BasisPtr enumerate_basis(int n, Label totalCharge,
                         const std::optional<std::vector<Label>>& leafConstraint) {
  if (n < 1) throw Error("enumerate_basis: n must be >= 1");
  if (n > 31) throw Error("enumerate_basis: n > 31 not supported");
  std::vector<FusionPath> paths;
  if (leafConstraint) {
    if (static_cast<int>(leafConstraint->size()) != n)
      throw Error("enumerate_basis: leaf constraint length != n");
    std::vector<Label> charges{Label::trivial};
    charges.reserve(n + 1);
    extend_charges(*leafConstraint, totalCharge, charges, paths);
  } else {
    std::vector<Label> leaves;
    leaves.reserve(n);
    enumerate_leaves(n, totalCharge, leaves, paths);
  }
  return std::make_shared<FusionPathBasis>(n, totalCharge, std::move(paths));
}

long fib_dimension(int n) {
  if (n < 1) throw Error("fib_dimension: n must be >= 1");
  const double phi = model_constants().phi;
  const double v =
      (std::pow(phi, n - 1) - std::pow(-1.0 / phi, n - 1)) / std::sqrt(5.0);
  return std::lround(v);
}

}  // namespace fibdistill
