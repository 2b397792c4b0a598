#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "zkpark/algebra/fields.hpp"
#include "zkpark/util/bytes.hpp"

namespace zkpark {

struct LeafInsertRecord {
  std::uint64_t leaf_index = 0;
  Fr commitment;
  std::int64_t registered_at_ms = 0;
  Bytes uid;
  bool operator==(const LeafInsertRecord&) const = default;
};

struct EpochRotateRecord {
  std::uint64_t epoch_id = 0;
  Fr nu;
  std::int64_t started_at_ms = 0;
  std::uint32_t duration_s = 0;
  bool operator==(const EpochRotateRecord&) const = default;
};

struct NullifierInsertRecord {
  std::uint64_t epoch_id = 0;
  Fr nf;
  bool operator==(const NullifierInsertRecord&) const = default;
};

using LogRecord = std::variant<LeafInsertRecord, EpochRotateRecord, NullifierInsertRecord>;

// Append-only file of typed records. Each record is framed as
// u32 length | payload | first 4 bytes of SHA-256(payload), so a write torn
// by a crash is detected and cut off on the next open.
class StateLog {
 public:
  static constexpr std::uint8_t kLeafInsert = 1;
  static constexpr std::uint8_t kEpochRotate = 2;
  static constexpr std::uint8_t kNullifierInsert = 3;

  // Creates the file if needed and truncates any invalid tail. IoError if
  // the file cannot be opened.
  explicit StateLog(std::filesystem::path file, bool sync_writes = true);
  ~StateLog();
  StateLog(const StateLog&) = delete;
  StateLog& operator=(const StateLog&) = delete;

  void append(const LogRecord& record);

  // Valid prefix of the file; a missing file reads as empty.
  static std::vector<LogRecord> read_all(const std::filesystem::path& file);

  static Bytes encode(const LogRecord& record);
  // DecodeError on a malformed payload.
  static LogRecord decode(std::span<const std::uint8_t> payload);

 private:
  std::filesystem::path file_;
  int fd_ = -1;
  bool sync_;
};

}  // namespace zkpark
