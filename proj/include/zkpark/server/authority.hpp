#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>

#include "zkpark/merkle/merkle.hpp"
#include "zkpark/protocol/messages.hpp"
#include "zkpark/prover/plonk.hpp"
#include "zkpark/server/state_log.hpp"

namespace zkpark {

using protocol::AuthOutcome;

struct AuthorityConfig {
  unsigned depth = IncrementalMerkleTree::kDefaultDepth;
  std::chrono::seconds epoch_duration{600};
  std::size_t root_history = 64;
  // Epochs whose nullifier sets are kept, the current one included.
  std::uint64_t nullifier_retention = 2;
  // Empty: state lives in memory only.
  std::filesystem::path data_dir;
  bool sync_writes = true;
};

struct RegistrationReceipt {
  std::uint64_t leaf_index = 0;
  MerklePath path;
  Fr root;
};

struct EpochState {
  std::uint64_t epoch_id = 0;
  Fr nu;
  std::int64_t started_at_ms = 0;
  std::chrono::seconds duration{0};
};

struct StateSnapshot {
  MerklePath path;
  Fr root;
  Fr nu;
  std::uint64_t epoch_id = 0;
};

struct LeafRange {
  std::vector<Fr> leaves;
  std::uint64_t next_index = 0;
  Fr root;
};

// Everything crash recovery must reproduce.
struct AuthoritySummary {
  Fr root;
  std::uint64_t next_index = 0;
  EpochState epoch;
  std::vector<Fr> current_nullifiers;  // sorted by encoding
  bool operator==(const AuthoritySummary& o) const {
    return root == o.root && next_index == o.next_index && epoch.epoch_id == o.epoch.epoch_id &&
           epoch.nu == o.epoch.nu && current_nullifiers == o.current_nullifiers;
  }
};

std::int64_t unix_millis();

// Registration, epoch rotation and replay-protected verification. Writers
// (insert, rotate, nullifier insert) serialize on one lock; readers share it,
// and proof verification runs with no lock held.
class Authority {
 public:
  // Replays <data_dir>/state.log when present; opens epoch 1 if the log
  // holds no epoch yet. ConfigError on bad limits.
  Authority(AuthorityConfig config, VerifyingKey vk);

  // ArgumentError for an empty or over-long uid; CapacityError when full.
  RegistrationReceipt register_identity(std::span<const std::uint8_t> uid, const Fr& commitment);
  // NotFoundError for an unregistered index.
  StateSnapshot query_state(std::uint64_t leaf_index) const;
  EpochState rotate_epoch();
  bool rotate_if_due(std::int64_t now_ms);
  EpochState current_epoch() const;

  AuthOutcome authenticate(const PublicInputs& publics, std::span<const std::uint8_t> proof_bytes);

  LeafRange leaves(std::uint64_t from, std::size_t max_count) const;
  bool root_known(const Fr& root) const;
  AuthoritySummary summary() const;
  std::uint64_t outcome_count(AuthOutcome o) const { return counts_[static_cast<std::size_t>(o)].load(); }

  const VerifyingKey& vk() const { return vk_; }
  unsigned depth() const { return config_.depth; }
  const AuthorityConfig& config() const { return config_; }

 private:
  using NfKey = std::array<std::uint8_t, 32>;

  void apply(const LogRecord& record);
  void persist(const LogRecord& record);
  void remember_root(const Fr& root);
  void prune_nullifiers();
  EpochState next_epoch_locked();
  AuthOutcome record(AuthOutcome o);

  AuthorityConfig config_;
  VerifyingKey vk_;
  mutable std::shared_mutex mu_;
  IncrementalMerkleTree tree_;
  std::deque<Fr> roots_;
  EpochState epoch_;
  std::map<std::uint64_t, std::set<NfKey>> nullifiers_;
  std::unique_ptr<StateLog> log_;
  std::array<std::atomic<std::uint64_t>, 6> counts_{};
};

}  // namespace zkpark
