#include "zkpark/kernels/msm.hpp"

#include <algorithm>
#include <array>

#include "zkpark/error.hpp"
#include "zkpark/kernels/parallel.hpp"

namespace zkpark::kernels {

namespace {

void check_lengths(std::span<const G1Affine> points, std::span<const Fr> scalars) {
  if (points.size() != scalars.size()) throw ArgumentError("msm: points and scalars differ in length");
}

// Bits [offset, offset + width) of k.
std::uint32_t window_digit(const U256& k, unsigned offset, unsigned width) {
  if (offset >= 256) return 0;
  const unsigned limb = offset / 64;
  const unsigned shift = offset % 64;
  std::uint64_t bits = k.limb[limb] >> shift;
  if (shift + width > 64 && limb + 1 < 4) bits |= k.limb[limb + 1] << (64 - shift);
  return static_cast<std::uint32_t>(bits & ((1ULL << width) - 1));
}

constexpr unsigned kScalarBits = Fr::kBits;

unsigned window_count(unsigned width) { return (kScalarBits + width) / width; }

// Signed base-2^width recoding, digits in [-2^(width-1), 2^(width-1)], laid
// out digits[i * windows + w].
std::vector<std::int32_t> signed_digits(std::span<const Fr> scalars, unsigned width) {
  const unsigned windows = window_count(width);
  const std::int64_t half = std::int64_t{1} << (width - 1);
  const std::int64_t full = std::int64_t{1} << width;
  std::vector<std::int32_t> out(scalars.size() * windows);
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    const U256 k = scalars[i].to_canonical();
    std::int64_t carry = 0;
    for (unsigned w = 0; w < windows; ++w) {
      std::int64_t d = static_cast<std::int64_t>(window_digit(k, w * width, width)) + carry;
      carry = 0;
      if (d > half) {
        d -= full;
        carry = 1;
      }
      out[i * windows + w] = static_cast<std::int32_t>(d);
    }
  }
  return out;
}

struct BucketAdd {
  std::uint32_t bucket;
  G1Affine point;
};

// Affine buckets updated in batches that share one field inversion. A bucket
// may appear once per batch; clashing additions wait for a later round.
// Small inputs skip batching and go to Jacobian buckets directly.
class AffineBuckets {
 public:
  AffineBuckets(std::size_t count, bool batched)
      : buckets_(count, G1Affine::identity()), busy_(count, 0), batched_(batched) {
    if (!batched_) overflow_.resize(count);
  }

  void add(std::uint32_t bucket, const G1Affine& point) {
    if (!batched_) {
      overflow_[bucket] = overflow_[bucket].add_affine(point);
      return;
    }
    G1Affine& b = buckets_[bucket];
    if (busy_[bucket] != 0) {
      later_.push_back({bucket, point});
    } else if (b.infinity) {
      b = point;
    } else {
      busy_[bucket] = 1;
      pending_.push_back({bucket, point});
      if (pending_.size() == kBatch) flush();
    }
  }

  void finish() {
    flush();
    std::vector<BucketAdd> work;
    while (later_.size() >= kMinRound) {
      work.swap(later_);
      later_.clear();
      for (const BucketAdd& item : work) add(item.bucket, item.point);
      flush();
    }
    // Too few left to amortise an inversion.
    if (!later_.empty() && overflow_.empty()) overflow_.resize(buckets_.size());
    for (const BucketAdd& item : later_) overflow_[item.bucket] = overflow_[item.bucket].add_affine(item.point);
    later_.clear();
  }

  // sum_j (j + 1) * bucket[first + j] for j < count
  G1Jacobian weighted_sum(std::size_t first, std::size_t count) const {
    G1Jacobian running;
    G1Jacobian acc;
    for (std::size_t j = first + count; j-- > first;) {
      running = running.add_affine(buckets_[j]);
      if (!overflow_.empty()) running += overflow_[j];
      acc += running;
    }
    return acc;
  }

 private:
  static constexpr std::size_t kBatch = 1024;
  static constexpr std::size_t kMinRound = 32;

  void flush() {
    const std::size_t m = pending_.size();
    if (m == 0) return;
    denom_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      const G1Affine& a = buckets_[pending_[k].bucket];
      const G1Affine& p = pending_[k].point;
      if (a.x != p.x) {
        denom_[k] = p.x - a.x;
      } else if (a.y == p.y && !a.y.is_zero()) {
        denom_[k] = a.y.dbl();
      } else {
        denom_[k] = Fq::one();  // P + (-P)
      }
    }
    batch_inverse<Fq>(denom_);
    for (std::size_t k = 0; k < m; ++k) {
      G1Affine& a = buckets_[pending_[k].bucket];
      const G1Affine& p = pending_[k].point;
      busy_[pending_[k].bucket] = 0;
      Fq lambda;
      if (a.x != p.x) {
        lambda = (p.y - a.y) * denom_[k];
      } else if (a.y == p.y && !a.y.is_zero()) {
        const Fq xx = a.x.square();
        lambda = (xx + xx + xx) * denom_[k];
      } else {
        a = G1Affine::identity();
        continue;
      }
      const Fq x3 = lambda.square() - a.x - p.x;
      a.y = lambda * (a.x - x3) - a.y;
      a.x = x3;
    }
    pending_.clear();
  }

  std::vector<G1Affine> buckets_;
  std::vector<std::uint8_t> busy_;
  bool batched_;
  std::vector<BucketAdd> pending_;
  std::vector<BucketAdd> later_;
  std::vector<Fq> denom_;
  std::vector<G1Jacobian> overflow_;
};

constexpr std::size_t kMinBatchedPoints = 64;

// Window sums for windows [first, last), sharing one bucket pool so that
// batches stay large.
void window_group(std::span<const G1Affine> points, const std::vector<std::int32_t>& digits, unsigned width,
                  unsigned first, unsigned last, std::vector<G1Jacobian>& sums) {
  const unsigned windows = window_count(width);
  const std::size_t per_window = std::size_t{1} << (width - 1);
  AffineBuckets buckets((last - first) * per_window, points.size() >= kMinBatchedPoints);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].infinity) continue;
    const G1Affine neg = -points[i];
    for (unsigned w = first; w < last; ++w) {
      const std::int32_t d = digits[i * windows + w];
      if (d == 0) continue;
      const std::size_t base = (w - first) * per_window;
      if (d > 0) {
        buckets.add(static_cast<std::uint32_t>(base + static_cast<std::size_t>(d - 1)), points[i]);
      } else {
        buckets.add(static_cast<std::uint32_t>(base + static_cast<std::size_t>(-d - 1)), neg);
      }
    }
  }
  buckets.finish();
  for (unsigned w = first; w < last; ++w) sums[w] = buckets.weighted_sum((w - first) * per_window, per_window);
}

G1Jacobian combine_windows(const std::vector<G1Jacobian>& sums, unsigned width) {
  G1Jacobian total;
  for (std::size_t w = sums.size(); w-- > 0;) {
    for (unsigned i = 0; i < width; ++i) total = total.dbl();
    total += sums[w];
  }
  return total;
}

}  // namespace

unsigned pippenger_window(std::size_t n) {
  // Rough cost in field multiplications: ~7 per batched affine addition and
  // ~27 per bucket in the running-sum pass.
  unsigned best = 2;
  double best_cost = 0;
  for (unsigned c = 2; c <= 16; ++c) {
    const double buckets = static_cast<double>(std::size_t{1} << (c - 1));
    const double cost = window_count(c) * (7.0 * static_cast<double>(n) + 27.0 * buckets);
    if (c == 2 || cost < best_cost) {
      best = c;
      best_cost = cost;
    }
  }
  return best;
}

G1Jacobian msm_reference(std::span<const G1Affine> points, std::span<const Fr> scalars) {
  check_lengths(points, scalars);
  G1Jacobian acc;
  for (std::size_t i = 0; i < points.size(); ++i) acc += G1Jacobian(points[i]) * scalars[i];
  return acc;
}

G1Jacobian msm_serial(std::span<const G1Affine> points, std::span<const Fr> scalars) {
  check_lengths(points, scalars);
  if (points.empty()) return {};
  const unsigned width = pippenger_window(points.size());
  const unsigned windows = window_count(width);
  const std::vector<std::int32_t> digits = signed_digits(scalars, width);
  std::vector<G1Jacobian> sums(windows);
  window_group(points, digits, width, 0, windows, sums);
  return combine_windows(sums, width);
}

G1Jacobian msm_parallel(std::span<const G1Affine> points, std::span<const Fr> scalars) {
  check_lengths(points, scalars);
  if (points.empty()) return {};
  const unsigned width = pippenger_window(points.size());
  const unsigned windows = window_count(width);
  const std::vector<std::int32_t> digits = signed_digits(scalars, width);
  std::vector<G1Jacobian> sums(windows);
  const auto groups = static_cast<std::ptrdiff_t>(std::min<unsigned>(windows, max_threads()));
#pragma omp parallel for schedule(static, 1)
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    const auto first = static_cast<unsigned>(g * windows / groups);
    const auto last = static_cast<unsigned>((g + 1) * windows / groups);
    window_group(points, digits, width, first, last, sums);
  }
  return combine_windows(sums, width);
}

G1Jacobian msm_dispatch(std::span<const G1Affine> points, std::span<const Fr> scalars) {
  if (use_parallel(points.size())) return msm_parallel(points, scalars);
  return msm_serial(points, scalars);
}

std::vector<G1Affine> fixed_base_mul_serial(const G1Affine& base, std::span<const Fr> scalars) {
  std::vector<G1Jacobian> out(scalars.size());
  const G1Jacobian b(base);
  for (std::size_t i = 0; i < scalars.size(); ++i) out[i] = b * scalars[i];
  return batch_to_affine<G1Curve>(out);
}

std::vector<G1Affine> fixed_base_mul_parallel(const G1Affine& base, std::span<const Fr> scalars) {
  constexpr unsigned kWidth = 8;
  constexpr unsigned kWindows = (kScalarBits + kWidth - 1) / kWidth;
  constexpr unsigned kEntries = (1U << kWidth) - 1;

  // table[w * kEntries + d - 1] = d * 2^(w*kWidth) * base
  std::vector<G1Jacobian> table_jac(static_cast<std::size_t>(kWindows) * kEntries);
  G1Jacobian window_base(base);
  for (unsigned w = 0; w < kWindows; ++w) {
    G1Jacobian acc;
    for (unsigned d = 0; d < kEntries; ++d) {
      acc += window_base;
      table_jac[w * kEntries + d] = acc;
    }
    for (unsigned i = 0; i < kWidth; ++i) window_base = window_base.dbl();
  }
  const std::vector<G1Affine> table = batch_to_affine<G1Curve>(table_jac);

  std::vector<G1Jacobian> out(scalars.size());
  const auto count = static_cast<std::ptrdiff_t>(scalars.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const U256 k = scalars[static_cast<std::size_t>(i)].to_canonical();
    G1Jacobian acc;
    for (unsigned w = 0; w < kWindows; ++w) {
      const std::uint32_t d = window_digit(k, w * kWidth, kWidth);
      if (d != 0) acc = acc.add_affine(table[w * kEntries + d - 1]);
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return batch_to_affine<G1Curve>(out);
}

}  // namespace zkpark::kernels
