#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "zkpark/algebra/fields.hpp"

namespace zkpark {

struct MerklePath {
  std::vector<Fr> siblings;  // leaf level first
  std::uint64_t index = 0;   // bit l set: node at level l is a right child

  unsigned depth() const { return static_cast<unsigned>(siblings.size()); }
  bool operator==(const MerklePath&) const = default;
};

// Folds leaf up the path; ArgumentError if index has bits above the depth.
Fr fold_path(const Fr& leaf, const MerklePath& path);
bool verify_path(const Fr& leaf, const MerklePath& path, const Fr& root);

// Empty-subtree hashes: zeros[0] = 0, zeros[i+1] = hash2(zeros[i], zeros[i]).
const std::vector<Fr>& zero_hashes(unsigned depth);

class IncrementalMerkleTree {
 public:
  static constexpr unsigned kDefaultDepth = 20;
  static constexpr unsigned kMinDepth = 2;
  static constexpr unsigned kMaxDepth = 32;

  explicit IncrementalMerkleTree(unsigned depth = kDefaultDepth);

  unsigned depth() const { return depth_; }
  std::uint64_t next_index() const { return levels_[0].size(); }
  std::uint64_t capacity() const { return std::uint64_t{1} << depth_; }
  const Fr& root() const { return root_; }
  const std::vector<Fr>& leaves() const { return levels_[0]; }
  const Fr& zero(unsigned level) const { return zeros_[level]; }

  // Returns the assigned index; CapacityError when full.
  std::uint64_t insert(const Fr& leaf);
  // NotFoundError for index >= next_index().
  MerklePath path(std::uint64_t index) const;

  // Total hash2 invocations performed by insert().
  std::uint64_t hash_count() const { return hash_count_; }

 private:
  unsigned depth_;
  std::vector<Fr> zeros_;
  std::vector<std::vector<Fr>> levels_;  // levels_[0] holds the leaves
  Fr root_;
  std::uint64_t hash_count_ = 0;
};

// Append-only file of 32-byte leaf encodings. A torn trailing record is ignored.
class LeafLog {
 public:
  explicit LeafLog(std::filesystem::path file);

  void append(const Fr& leaf);
  static std::vector<Fr> read_all(const std::filesystem::path& file);
  static IncrementalMerkleTree replay(const std::filesystem::path& file, unsigned depth);

 private:
  std::filesystem::path file_;
  std::ofstream out_;
};

}  // namespace zkpark
