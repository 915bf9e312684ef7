#include "fibdistill/net.hpp"

#include <cmath>
#include <unordered_map>

namespace fibdistill {

Quat quat_mul(const Quat& a, const Quat& b) {
  return Quat{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
              a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
              a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
              a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quat quat_conj(const Quat& q) { return Quat{q.w, -q.x, -q.y, -q.z}; }

double quat_dot(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

Quat quat_normalize(const Quat& q) {
  const double n = std::sqrt(quat_dot(q, q));
  if (n < 1e-300) throw Error("quat_normalize: zero quaternion");
  return Quat{q.w / n, q.x / n, q.y / n, q.z / n};
}

Quat quat_rotation(const double axis[3], double angle) {
  const double n =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (n < 1e-300) throw Error("quat_rotation: zero axis");
  const double s = std::sin(angle / 2.0) / n;
  return Quat{std::cos(angle / 2.0), s * axis[0], s * axis[1], s * axis[2]};
}

void quat_axis_angle(const Quat& qin, double axis[3], double& angle) {
  Quat q = quat_normalize(qin);
  if (q.w < 0.0) q = Quat{-q.w, -q.x, -q.y, -q.z};
  const double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  angle = 2.0 * std::atan2(vn, q.w);
  if (vn < 1e-12) {
    axis[0] = 1.0;
    axis[1] = 0.0;
    axis[2] = 0.0;
  } else {
    axis[0] = q.x / vn;
    axis[1] = q.y / vn;
    axis[2] = q.z / vn;
  }
}

Eigen::Matrix2cd su2_from_quat(const Quat& q) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd u;
  u(0, 0) = q.w - i * q.z;
  u(0, 1) = -i * q.x - q.y;
  u(1, 0) = -i * q.x + q.y;
  u(1, 1) = q.w + i * q.z;
  return u;
}

Quat quat_from_unitary(const Eigen::Matrix2cd& uin) {
  const Complex det = uin(0, 0) * uin(1, 1) - uin(0, 1) * uin(1, 0);
  const double dn = std::abs(det);
  if (dn < 1e-12) throw Error("quat_from_unitary: matrix is singular");
  const Complex root = std::polar(std::sqrt(dn), std::arg(det) / 2.0);
  const Eigen::Matrix2cd u = uin / root;
  Quat q;
  q.w = 0.5 * (u(0, 0) + u(1, 1)).real();
  q.z = 0.5 * (u(1, 1) - u(0, 0)).imag();
  q.x = -0.5 * (u(0, 1) + u(1, 0)).imag();
  q.y = 0.5 * (u(1, 0) - u(0, 1)).real();
  return quat_normalize(q);
}

double quat_proj_distance(const Quat& a, const Quat& b) {
  const double d = std::min(1.0, std::abs(quat_dot(a, b)));
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - d)));
}

namespace {

BraidWord make_word(int strands, std::initializer_list<int> signedIndices) {
  // Positive entry k encodes sigma_k, negative encodes sigma_{-k}^{-1}.
  BraidWord w;
  w.strandCount = strands;
  for (int v : signedIndices) w.push(std::abs(v), v > 0 ? 1 : -1);
  return w;
}

std::vector<BraidWord> constraint_words(NetConstraint c) {
  std::vector<BraidWord> base;
  if (c == NetConstraint::purebraid4) {
    // Band generators a_jk: strand j loops around strand k.
    base.push_back(make_word(4, {1, 1}));                    // a_12
    base.push_back(make_word(4, {2, 1, 1, -2}));             // a_13
    base.push_back(make_word(4, {3, 2, 1, 1, -2, -3}));      // a_14
    base.push_back(make_word(4, {2, 2}));                    // a_23
    base.push_back(make_word(4, {3, 2, 2, -3}));             // a_24
    base.push_back(make_word(4, {3, 3}));                    // a_34
  } else {
    // Warp at position 2; each move returns it there.
    base.push_back(make_word(3, {1, 1}));
    base.push_back(make_word(3, {2, 2}));
  }
  std::vector<BraidWord> out;
  for (const BraidWord& w : base) {
    out.push_back(w);
    out.push_back(inverse_word(w));
  }
  return out;
}

}  // namespace

BraidNet::BraidNet(BasisPtr basis, NetConstraint constraint,
                   NetParameters params)
    : basis_(std::move(basis)), constraint_(constraint), params_(params) {
  if (!basis_) throw Error("BraidNet: null basis");
  if (basis_->size() != 2)
    throw Error("BraidNet: sector dimension must be 2, got " +
                std::to_string(basis_->size()));
  if (params_.maxBaseLength < 0 || params_.maxBaseLength > 16)
    throw Error("BraidNet: maxBaseLength must be in [0, 16]");
  if (params_.cellSize <= 0.0) throw Error("BraidNet: cellSize must be > 0");
  const int expected =
      constraint_ == NetConstraint::purebraid4 ? 4 : 3;
  if (basis_->dot_count() != expected)
    throw Error("BraidNet: basis strand count does not match constraint");
  build();
}

std::uint64_t BraidNet::cell_key(const Quat& qin) const {
  Quat q = quat_normalize(qin);
  if (q.w < 0.0 || (q.w == 0.0 && (q.x < 0.0 || (q.x == 0.0 && (q.y < 0.0 ||
      (q.y == 0.0 && q.z < 0.0))))))
    q = Quat{-q.w, -q.x, -q.y, -q.z};
  const double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  const double angle = 2.0 * std::atan2(vn, q.w);
  const double scale = vn > 1e-12 ? angle / vn : 2.0;
  std::uint64_t key = 0;
  const double coords[3] = {q.x * scale, q.y * scale, q.z * scale};
  for (int i = 0; i < 3; ++i) {
    const long c = std::lround(std::floor(coords[i] / params_.cellSize));
    key = (key << 21) | static_cast<std::uint64_t>((c + (1 << 20)) & 0x1FFFFF);
  }
  return key;
}

void BraidNet::build() {
  const std::vector<BraidWord> words = constraint_words(constraint_);
  symbols_.clear();
  for (std::size_t i = 0; i < words.size(); ++i) {
    SectorUnitary u = word_unitary(words[i], basis_);
    NetSymbol s;
    s.word = words[i];
    s.image = quat_from_unitary(u.matrix);
    s.inverseId = static_cast<int>(i ^ 1ull);  // inverses are adjacent
    symbols_.push_back(std::move(s));
  }

  entries_.clear();
  std::unordered_map<std::uint64_t, std::uint32_t> cells;
  Packed identity{{1.0, 0.0, 0.0, 0.0}, 0, 0, 0};
  cells.emplace(cell_key(Quat{}), 0);
  entries_.push_back(identity);

  std::vector<std::uint32_t> frontier{0};
  for (int depth = 1; depth <= params_.maxBaseLength; ++depth) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t id : frontier) {
      const Packed parent = entries_[id];  // copy: entries_ may reallocate
      const int lastSym =
          parent.symLen == 0
              ? -1
              : static_cast<int>((parent.code >> (4 * (parent.symLen - 1))) &
                                 0xF);
      const Quat pq{parent.q[0], parent.q[1], parent.q[2], parent.q[3]};
      for (std::size_t s = 0; s < symbols_.size(); ++s) {
        if (lastSym >= 0 && symbols_[lastSym].inverseId == static_cast<int>(s))
          continue;  // immediate backtracking never yields a new shortest word
        const Quat q = quat_normalize(quat_mul(symbols_[s].image, pq));
        const std::uint64_t key = cell_key(q);
        if (cells.find(key) != cells.end()) continue;
        Packed e;
        e.q[0] = q.w;
        e.q[1] = q.x;
        e.q[2] = q.y;
        e.q[3] = q.z;
        e.code = parent.code | (static_cast<std::uint64_t>(s)
                                << (4 * parent.symLen));
        e.crossLen =
            parent.crossLen + static_cast<std::uint32_t>(symbols_[s].word.length());
        e.symLen = static_cast<std::uint8_t>(parent.symLen + 1);
        const std::uint32_t newId = static_cast<std::uint32_t>(entries_.size());
        cells.emplace(key, newId);
        entries_.push_back(e);
        next.push_back(newId);
      }
    }
    frontier = std::move(next);
    if (frontier.empty() || entries_.size() >= params_.entryCap) break;
  }

  maxCrossLen_ = 0;
  for (const Packed& e : entries_)
    maxCrossLen_ = std::max<std::size_t>(maxCrossLen_, e.crossLen);
}

BraidNet::Lookup BraidNet::nearest(const Quat& qin) const {
  const Quat q = quat_normalize(qin);
  double best = -1.0;
  std::size_t bestId = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Packed& e = entries_[i];
    const double d = std::abs(q.w * e.q[0] + q.x * e.q[1] + q.y * e.q[2] +
                              q.z * e.q[3]);
    if (d > best) {
      best = d;
      bestId = i;
    }
  }
  return Lookup{bestId, quat_proj_distance(q, entry_quat(bestId))};
}

std::vector<int> BraidNet::entry_symbols(std::size_t id) const {
  const Packed& e = entries_.at(id);
  std::vector<int> syms(e.symLen);
  for (int i = 0; i < e.symLen; ++i)
    syms[i] = static_cast<int>((e.code >> (4 * i)) & 0xF);
  return syms;
}

Quat BraidNet::entry_quat(std::size_t id) const {
  const Packed& e = entries_.at(id);
  return Quat{e.q[0], e.q[1], e.q[2], e.q[3]};
}

std::size_t BraidNet::entry_crossing_length(std::size_t id) const {
  return entries_.at(id).crossLen;
}

std::uint64_t BraidNet::entry_key(std::size_t id) const {
  return cell_key(entry_quat(id));
}

BraidWord BraidNet::expand_symbols(const std::vector<int>& syms) const {
  BraidWord out;
  out.strandCount = basis_->dot_count();
  for (int s : syms) {
    if (s < 0 || s >= static_cast<int>(symbols_.size()))
      throw Error("expand_symbols: symbol id out of range");
    out.crossings.insert(out.crossings.end(),
                         symbols_[s].word.crossings.begin(),
                         symbols_[s].word.crossings.end());
  }
  return out;
}

BraidWord BraidNet::entry_word(std::size_t id) const {
  return expand_symbols(entry_symbols(id));
}

NetEntry BraidNet::materialize(std::size_t id) const {
  NetEntry e;
  e.word = entry_word(id);
  e.image = word_unitary(e.word, basis_);
  e.key = entry_key(id);
  if (constraint_ == NetConstraint::purebraid4 && !is_purebraid(e.word))
    throw Error("net invariant violated: entry is not a purebraid");
  if (constraint_ == NetConstraint::weave3) {
    auto traj = weave_trajectory(e.word, 2);
    if (!traj || traj->back() != 2)
      throw Error("net invariant violated: entry is not a closed weave");
  }
  return e;
}

}  // namespace fibdistill
