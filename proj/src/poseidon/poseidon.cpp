#include "zkpark/poseidon/poseidon.hpp"

#include <sstream>
#include <utility>

#include "zkpark/util/bytes.hpp"

namespace zkpark {

namespace {

class ConstantStream {
 public:
  explicit ConstantStream(std::string_view tag) : tag_(tag) {}

  Fr next() {
    for (;;) {
      Bytes input(tag_.begin(), tag_.end());
      append_u64_le(input, counter_++);
      const auto digest = sha256(input);
      U256 v;
      for (std::size_t i = 0; i < 32; ++i) v.limb[i / 8] |= static_cast<std::uint64_t>(digest[i]) << (8 * (i % 8));
      v.limb[3] &= (1ULL << 62) - 1;
      if (compare(v, Fr::kModulus) < 0) return Fr::from_canonical(v);
    }
  }

 private:
  std::string tag_;
  std::uint64_t counter_ = 0;
};

Fr pow_small(const Fr& x, std::uint64_t alpha) {
  if (alpha == 5) {
    const Fr x2 = x.square();
    return x2.square() * x;
  }
  return x.pow(alpha);
}

}  // namespace

PoseidonParams::PoseidonParams(std::size_t width, std::size_t full_rounds, std::size_t partial_rounds,
                               std::uint64_t alpha, std::vector<std::vector<Fr>> mds,
                               std::vector<Fr> round_constants)
    : width_(width),
      full_rounds_(full_rounds),
      partial_rounds_(partial_rounds),
      alpha_(alpha),
      mds_(std::move(mds)),
      round_constants_(std::move(round_constants)) {
  if (width_ < 2) throw ArgumentError("poseidon width must be at least 2");
  if (full_rounds_ % 2 != 0) throw ArgumentError("full rounds must be even");
  if (alpha_ < 3) throw ArgumentError("s-box exponent must be at least 3");
  if (round_constants_.size() != width_ * rounds()) throw ArgumentError("round constant count mismatch");
  if (mds_.size() != width_) throw ArgumentError("mds row count mismatch");
  for (const auto& row : mds_) {
    if (row.size() != width_) throw ArgumentError("mds column count mismatch");
  }
  if (determinant(mds_).is_zero()) throw ConfigError("mds matrix is singular");
}

PoseidonParams PoseidonParams::generate(std::string_view tag, std::size_t width, std::size_t full_rounds,
                                        std::size_t partial_rounds, std::uint64_t alpha) {
  ConstantStream stream(tag);
  std::vector<Fr> rc(width * (full_rounds + partial_rounds));
  for (auto& c : rc) c = stream.next();
  std::vector<Fr> xs(width);
  std::vector<Fr> ys(width);
  for (auto& x : xs) x = stream.next();
  for (auto& y : ys) y = stream.next();
  std::vector<std::vector<Fr>> mds(width, std::vector<Fr>(width));
  for (std::size_t i = 0; i < width; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      const Fr s = xs[i] + ys[j];
      if (s.is_zero()) throw ConfigError("cauchy matrix entry undefined");
      mds[i][j] = s.inverse();
    }
  }
  return PoseidonParams(width, full_rounds, partial_rounds, alpha, std::move(mds), std::move(rc));
}

const PoseidonParams& PoseidonParams::standard() {
  static const PoseidonParams params = generate(kPoseidonTag, 3, 8, 57, 5);
  return params;
}

Fr determinant(std::vector<std::vector<Fr>> m) {
  const std::size_t n = m.size();
  Fr det = Fr::one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return Fr::zero();
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    const Fr inv = m[col][col].inverse();
    for (std::size_t row = col + 1; row < n; ++row) {
      const Fr f = m[row][col] * inv;
      for (std::size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
    }
  }
  return det;
}

std::vector<Fr> permute(std::span<const Fr> state, const PoseidonParams& params) {
  const std::size_t t = params.width();
  if (state.size() != t) throw ArgumentError("poseidon state length mismatch");
  std::vector<Fr> s(state.begin(), state.end());
  std::vector<Fr> tmp(t);
  const auto& mds = params.mds();
  for (std::size_t r = 0; r < params.rounds(); ++r) {
    for (std::size_t i = 0; i < t; ++i) s[i] += params.round_constant(r, i);
    if (params.is_full_round(r)) {
      for (auto& x : s) x = pow_small(x, params.alpha());
    } else {
      s[0] = pow_small(s[0], params.alpha());
    }
    for (std::size_t i = 0; i < t; ++i) {
      Fr acc;
      for (std::size_t j = 0; j < t; ++j) acc += mds[i][j] * s[j];
      tmp[i] = acc;
    }
    s.swap(tmp);
  }
  return s;
}

Fr hash1(const Fr& a) {
  const Fr in[3] = {Fr::from_u64(kHash1Domain), a, Fr::zero()};
  return permute(in)[0];
}

Fr hash2(const Fr& a, const Fr& b) {
  const Fr in[3] = {Fr::from_u64(kHash2Domain), a, b};
  return permute(in)[0];
}

std::string params_dump(const PoseidonParams& params) {
  std::ostringstream os;
  const auto& rc = params.round_constants();
  for (std::size_t i = 0; i < rc.size(); ++i) os << "round_constant[" << i << "] " << to_hex(rc[i].to_bytes()) << '\n';
  for (std::size_t i = 0; i < params.width(); ++i) {
    for (std::size_t j = 0; j < params.width(); ++j) {
      os << "mds[" << i << "][" << j << "] " << to_hex(params.mds()[i][j].to_bytes()) << '\n';
    }
  }
  return os.str();
}

}  // namespace zkpark
