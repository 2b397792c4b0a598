#include "zkpark/merkle/merkle.hpp"

#include <map>
#include <mutex>

#include "zkpark/poseidon/poseidon.hpp"

namespace zkpark {

const std::vector<Fr>& zero_hashes(unsigned depth) {
  static std::mutex mu;
  static std::map<unsigned, std::vector<Fr>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(depth);
  if (it != cache.end()) return it->second;
  std::vector<Fr> z(depth + 1);
  for (unsigned i = 0; i < depth; ++i) z[i + 1] = hash2(z[i], z[i]);
  return cache.emplace(depth, std::move(z)).first->second;
}

Fr fold_path(const Fr& leaf, const MerklePath& path) {
  const unsigned d = path.depth();
  if (d < 64 && (path.index >> d) != 0) throw ArgumentError("path index exceeds tree capacity");
  Fr cur = leaf;
  for (unsigned l = 0; l < d; ++l) {
    cur = ((path.index >> l) & 1) != 0 ? hash2(path.siblings[l], cur) : hash2(cur, path.siblings[l]);
  }
  return cur;
}

bool verify_path(const Fr& leaf, const MerklePath& path, const Fr& root) {
  const unsigned d = path.depth();
  if (d < 64 && (path.index >> d) != 0) return false;
  return fold_path(leaf, path) == root;
}

IncrementalMerkleTree::IncrementalMerkleTree(unsigned depth) : depth_(depth) {
  if (depth < kMinDepth || depth > kMaxDepth) throw ConfigError("merkle depth must be in [2, 32]");
  zeros_ = zero_hashes(depth);
  levels_.resize(depth + 1);
  root_ = zeros_[depth];
}

std::uint64_t IncrementalMerkleTree::insert(const Fr& leaf) {
  const std::uint64_t index = next_index();
  if (index >= capacity()) throw CapacityError("merkle tree is full");
  levels_[0].push_back(leaf);
  Fr cur = leaf;
  std::uint64_t pos = index;
  for (unsigned l = 0; l < depth_; ++l) {
    cur = (pos & 1) != 0 ? hash2(levels_[l][pos - 1], cur) : hash2(cur, zeros_[l]);
    ++hash_count_;
    pos >>= 1;
    auto& up = levels_[l + 1];
    if (pos < up.size()) {
      up[pos] = cur;
    } else {
      up.push_back(cur);
    }
  }
  root_ = cur;
  return index;
}

MerklePath IncrementalMerkleTree::path(std::uint64_t index) const {
  if (index >= next_index()) throw NotFoundError("no leaf at index " + std::to_string(index));
  MerklePath out;
  out.index = index;
  out.siblings.resize(depth_);
  std::uint64_t pos = index;
  for (unsigned l = 0; l < depth_; ++l) {
    const std::uint64_t sib = pos ^ 1;
    out.siblings[l] = sib < levels_[l].size() ? levels_[l][sib] : zeros_[l];
    pos >>= 1;
  }
  return out;
}

LeafLog::LeafLog(std::filesystem::path file) : file_(std::move(file)) {
  // Drop a torn tail so new records stay aligned.
  std::error_code ec;
  const auto size = std::filesystem::file_size(file_, ec);
  if (!ec && size % 32 != 0) std::filesystem::resize_file(file_, size - size % 32);
  out_.open(file_, std::ios::binary | std::ios::app);
  if (!out_) throw IoError("cannot open leaf log " + file_.string());
}

void LeafLog::append(const Fr& leaf) {
  const auto bytes = leaf.to_bytes();
  out_.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  out_.flush();
  if (!out_) throw IoError("leaf log write failed");
}

std::vector<Fr> LeafLog::read_all(const std::filesystem::path& file) {
  std::vector<Fr> out;
  std::ifstream in(file, std::ios::binary);
  if (!in) return out;
  std::array<std::uint8_t, 32> buf{};
  while (in.read(reinterpret_cast<char*>(buf.data()), buf.size())) out.push_back(Fr::from_bytes(buf));
  return out;
}

IncrementalMerkleTree LeafLog::replay(const std::filesystem::path& file, unsigned depth) {
  IncrementalMerkleTree tree(depth);
  for (const Fr& leaf : read_all(file)) tree.insert(leaf);
  return tree;
}

}  // namespace zkpark
