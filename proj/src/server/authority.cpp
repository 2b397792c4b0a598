#include "zkpark/server/authority.hpp"

#include <algorithm>
#include <mutex>

#include "zkpark/identity/identity.hpp"
#include "zkpark/util/random.hpp"

namespace zkpark {

namespace {

std::array<std::uint8_t, 32> key_of(const Fr& x) { return x.to_bytes(); }

}  // namespace

std::int64_t unix_millis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Authority::Authority(AuthorityConfig config, VerifyingKey vk)
    : config_(std::move(config)), vk_(std::move(vk)), tree_(config_.depth) {
  if (config_.root_history == 0) throw ConfigError("root history must hold at least one root");
  if (config_.nullifier_retention == 0) throw ConfigError("nullifier retention must be at least one epoch");
  if (config_.epoch_duration.count() <= 0) throw ConfigError("epoch duration must be positive");
  if (!config_.data_dir.empty()) {
    std::filesystem::create_directories(config_.data_dir);
    const auto file = config_.data_dir / "state.log";
    for (const LogRecord& r : StateLog::read_all(file)) apply(r);
    log_ = std::make_unique<StateLog>(file, config_.sync_writes);
  }
  if (epoch_.epoch_id == 0) rotate_epoch();
}

void Authority::persist(const LogRecord& record) {
  if (log_) log_->append(record);
}

void Authority::remember_root(const Fr& root) {
  roots_.push_back(root);
  while (roots_.size() > config_.root_history) roots_.pop_front();
}

void Authority::prune_nullifiers() {
  while (!nullifiers_.empty() && nullifiers_.begin()->first + config_.nullifier_retention <= epoch_.epoch_id) {
    nullifiers_.erase(nullifiers_.begin());
  }
}

void Authority::apply(const LogRecord& record) {
  if (const auto* leaf = std::get_if<LeafInsertRecord>(&record)) {
    if (leaf->leaf_index != tree_.next_index()) throw IoError("state log leaf order is inconsistent");
    tree_.insert(leaf->commitment);
    remember_root(tree_.root());
  } else if (const auto* ep = std::get_if<EpochRotateRecord>(&record)) {
    epoch_ = {ep->epoch_id, ep->nu, ep->started_at_ms, std::chrono::seconds(ep->duration_s)};
    nullifiers_[ep->epoch_id];
    prune_nullifiers();
  } else {
    const auto& nf = std::get<NullifierInsertRecord>(record);
    // Sets of pruned epochs stay pruned on replay.
    if (nf.epoch_id + config_.nullifier_retention > epoch_.epoch_id) nullifiers_[nf.epoch_id].insert(key_of(nf.nf));
  }
}

RegistrationReceipt Authority::register_identity(std::span<const std::uint8_t> uid, const Fr& commitment) {
  if (uid.empty() || uid.size() > kMaxUidBytes) throw ArgumentError("uid must be 1 to 64 bytes");
  std::unique_lock lock(mu_);
  if (tree_.next_index() >= tree_.capacity()) throw CapacityError("membership tree is full");
  const LeafInsertRecord rec{tree_.next_index(), commitment, unix_millis(), Bytes(uid.begin(), uid.end())};
  persist(rec);
  apply(rec);
  return {rec.leaf_index, tree_.path(rec.leaf_index), tree_.root()};
}

StateSnapshot Authority::query_state(std::uint64_t leaf_index) const {
  std::shared_lock lock(mu_);
  return {tree_.path(leaf_index), tree_.root(), epoch_.nu, epoch_.epoch_id};
}

EpochState Authority::next_epoch_locked() {
  SystemRandom rng;
  Fr nu;
  do {
    nu = Fr::random(rng);
  } while (nu.is_zero());
  const EpochRotateRecord rec{epoch_.epoch_id + 1, nu, unix_millis(),
                              static_cast<std::uint32_t>(config_.epoch_duration.count())};
  persist(rec);
  apply(rec);
  return epoch_;
}

EpochState Authority::rotate_epoch() {
  std::unique_lock lock(mu_);
  return next_epoch_locked();
}

bool Authority::rotate_if_due(std::int64_t now_ms) {
  std::unique_lock lock(mu_);
  const auto due = epoch_.started_at_ms + std::chrono::duration_cast<std::chrono::milliseconds>(epoch_.duration).count();
  if (now_ms < due) return false;
  next_epoch_locked();
  return true;
}

EpochState Authority::current_epoch() const {
  std::shared_lock lock(mu_);
  return epoch_;
}

bool Authority::root_known(const Fr& root) const {
  std::shared_lock lock(mu_);
  return std::find(roots_.begin(), roots_.end(), root) != roots_.end();
}

AuthOutcome Authority::record(AuthOutcome o) {
  counts_[static_cast<std::size_t>(o)].fetch_add(1);
  return o;
}

AuthOutcome Authority::authenticate(const PublicInputs& publics, std::span<const std::uint8_t> proof_bytes) {
  const NfKey nf = key_of(publics.nf);
  std::uint64_t epoch_id = 0;
  {
    std::shared_lock lock(mu_);
    if (publics.nu != epoch_.nu) return record(AuthOutcome::kStaleNullifier);
    if (std::find(roots_.begin(), roots_.end(), publics.rh) == roots_.end()) return record(AuthOutcome::kUnknownRoot);
    if (nullifiers_.at(epoch_.epoch_id).contains(nf)) return record(AuthOutcome::kNullifierSeen);
    epoch_id = epoch_.epoch_id;
  }
  try {
    if (!verify(vk_, publics, proof_bytes)) return record(AuthOutcome::kInvalidProof);
  } catch (const DecodeError&) {
    return record(AuthOutcome::kMalformed);
  }
  std::unique_lock lock(mu_);
  // The epoch may have turned while the proof was being checked.
  if (epoch_.epoch_id != epoch_id) return record(AuthOutcome::kStaleNullifier);
  auto& seen = nullifiers_.at(epoch_id);
  if (seen.contains(nf)) return record(AuthOutcome::kNullifierSeen);
  persist(NullifierInsertRecord{epoch_id, publics.nf});
  seen.insert(nf);
  return record(AuthOutcome::kAccept);
}

LeafRange Authority::leaves(std::uint64_t from, std::size_t max_count) const {
  std::shared_lock lock(mu_);
  LeafRange out;
  const auto& all = tree_.leaves();
  out.next_index = all.size();
  out.root = tree_.root();
  if (from < all.size()) {
    const std::size_t n = std::min<std::size_t>(max_count, all.size() - from);
    out.leaves.assign(all.begin() + static_cast<std::ptrdiff_t>(from),
                      all.begin() + static_cast<std::ptrdiff_t>(from + n));
  }
  return out;
}

AuthoritySummary Authority::summary() const {
  std::shared_lock lock(mu_);
  AuthoritySummary s;
  s.root = tree_.root();
  s.next_index = tree_.next_index();
  s.epoch = epoch_;
  for (const NfKey& k : nullifiers_.at(epoch_.epoch_id)) s.current_nullifiers.push_back(Fr::from_bytes(k));
  return s;
}

}  // namespace zkpark
