#include "zkpark/server/state_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "zkpark/error.hpp"

namespace zkpark {

namespace {

constexpr std::size_t kMaxPayload = 1 << 16;

void append_fr(Bytes& out, const Fr& x) {
  const auto b = x.to_bytes();
  out.insert(out.end(), b.begin(), b.end());
}

std::array<std::uint8_t, 4> checksum(std::span<const std::uint8_t> payload) {
  const auto h = sha256(payload);
  return {h[0], h[1], h[2], h[3]};
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> in) : in_(in) {}
  std::span<const std::uint8_t> take(std::size_t n) {
    if (in_.size() - pos_ < n) throw DecodeError("truncated log record");
    const auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint64_t u64() { return read_u64_le(take(8)); }
  std::uint32_t u32() { return read_u32_le(take(4)); }
  Fr fr() { return Fr::from_bytes(take(32)); }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

// Returns the records and the byte length of the valid prefix.
std::pair<std::vector<LogRecord>, std::size_t> scan(const Bytes& data) {
  std::vector<LogRecord> records;
  std::size_t pos = 0;
  while (data.size() - pos >= 4) {
    const std::uint32_t len = read_u32_le(std::span(data).subspan(pos, 4));
    if (len == 0 || len > kMaxPayload || data.size() - pos - 4 < std::size_t{len} + 4) break;
    const auto payload = std::span(data).subspan(pos + 4, len);
    const auto sum = checksum(payload);
    if (!std::equal(sum.begin(), sum.end(), data.begin() + static_cast<std::ptrdiff_t>(pos + 4 + len))) break;
    try {
      records.push_back(StateLog::decode(payload));
    } catch (const Error&) {
      break;
    }
    pos += 4 + len + 4;
  }
  return {std::move(records), pos};
}

Bytes read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return {};
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

Bytes StateLog::encode(const LogRecord& record) {
  Bytes out;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, LeafInsertRecord>) {
          out.push_back(kLeafInsert);
          append_u64_le(out, r.leaf_index);
          append_fr(out, r.commitment);
          append_u64_le(out, static_cast<std::uint64_t>(r.registered_at_ms));
          append_u32_le(out, static_cast<std::uint32_t>(r.uid.size()));
          out.insert(out.end(), r.uid.begin(), r.uid.end());
        } else if constexpr (std::is_same_v<T, EpochRotateRecord>) {
          out.push_back(kEpochRotate);
          append_u64_le(out, r.epoch_id);
          append_fr(out, r.nu);
          append_u64_le(out, static_cast<std::uint64_t>(r.started_at_ms));
          append_u32_le(out, r.duration_s);
        } else {
          out.push_back(kNullifierInsert);
          append_u64_le(out, r.epoch_id);
          append_fr(out, r.nf);
        }
      },
      record);
  return out;
}

LogRecord StateLog::decode(std::span<const std::uint8_t> payload) {
  Cursor c(payload);
  const std::uint8_t type = c.take(1)[0];
  LogRecord out;
  if (type == kLeafInsert) {
    LeafInsertRecord r;
    r.leaf_index = c.u64();
    r.commitment = c.fr();
    r.registered_at_ms = static_cast<std::int64_t>(c.u64());
    const auto uid = c.take(c.u32());
    r.uid.assign(uid.begin(), uid.end());
    out = std::move(r);
  } else if (type == kEpochRotate) {
    EpochRotateRecord r;
    r.epoch_id = c.u64();
    r.nu = c.fr();
    r.started_at_ms = static_cast<std::int64_t>(c.u64());
    r.duration_s = c.u32();
    out = r;
  } else if (type == kNullifierInsert) {
    NullifierInsertRecord r;
    r.epoch_id = c.u64();
    r.nf = c.fr();
    out = r;
  } else {
    throw DecodeError("unknown log record type " + std::to_string(type));
  }
  if (!c.done()) throw DecodeError("trailing bytes in log record");
  return out;
}

std::vector<LogRecord> StateLog::read_all(const std::filesystem::path& file) { return scan(read_file(file)).first; }

StateLog::StateLog(std::filesystem::path file, bool sync_writes) : file_(std::move(file)), sync_(sync_writes) {
  const std::size_t valid = scan(read_file(file_)).second;
  fd_ = ::open(file_.c_str(), O_WRONLY | O_CREAT, 0600);
  if (fd_ < 0) throw IoError("cannot open " + file_.string() + ": " + std::strerror(errno));
  if (::ftruncate(fd_, static_cast<off_t>(valid)) != 0 || ::lseek(fd_, 0, SEEK_END) < 0) {
    ::close(fd_);
    throw IoError("cannot trim " + file_.string() + ": " + std::strerror(errno));
  }
}

StateLog::~StateLog() {
  if (fd_ >= 0) ::close(fd_);
}

void StateLog::append(const LogRecord& record) {
  const Bytes payload = encode(record);
  Bytes frame;
  frame.reserve(payload.size() + 8);
  append_u32_le(frame, static_cast<std::uint32_t>(payload.size()));
  frame.insert(frame.end(), payload.begin(), payload.end());
  const auto sum = checksum(payload);
  frame.insert(frame.end(), sum.begin(), sum.end());
  std::size_t done = 0;
  while (done < frame.size()) {
    const ssize_t n = ::write(fd_, frame.data() + done, frame.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("write to " + file_.string() + ": " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync_ && ::fdatasync(fd_) != 0) throw IoError("fdatasync " + file_.string() + ": " + std::strerror(errno));
}

}  // namespace zkpark
