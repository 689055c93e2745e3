#include "gridpass/credential_store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "gridpass/codegrid.hpp"
#include "gridpass/random.hpp"

namespace gridpass {

namespace {

constexpr std::string_view kMagic = "gridpass-store";
constexpr int kFormatVersion = 1;
constexpr std::size_t kMaxUsername = 64;

bool valid_username(std::string_view name) {
  if (name.empty() || name.size() > kMaxUsername) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-' || c == '@';
  });
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    const std::size_t end = line.find(' ', pos);
    fields.push_back(line.substr(pos, end == std::string_view::npos ? line.size() - pos : end - pos));
    pos = end == std::string_view::npos ? line.size() : end;
  }
  return fields;
}

[[noreturn]] void parse_fail(std::size_t line, std::string_view field, const std::string& what) {
  throw Error(Errc::parse_error,
              "line " + std::to_string(line) + ", field '" + std::string(field) + "': " + what);
}

void write_all(int fd, std::string_view data, const std::string& where) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::io_error, where + ": " + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string_view to_string(StoreMode mode) noexcept {
  return mode == StoreMode::password_only ? "password-only" : "username-scoped";
}

void check_password(std::string_view password, const CharacterSet& charset) {
  if (password.empty()) throw Error(Errc::empty_password, "password is empty");
  if (password.size() > kMaxLength)
    throw Error(Errc::over_length, "password has " + std::to_string(password.size()) +
                                       " characters, limit is " + std::to_string(kMaxLength));
  if (password.find(' ') != std::string_view::npos)
    throw Error(Errc::contains_space, "password contains a space");
  for (std::size_t i = 0; i < password.size(); ++i)
    if (!charset.contains(password[i]))
      throw Error(Errc::invalid_character, "character at position " + std::to_string(i) +
                                               " is not in charset '" + charset.id() + "'");
}

CredentialStore::CredentialStore(CharacterSet charset, StoreMode mode)
    : charset_(std::move(charset)), mode_(mode) {
  require_valid(charset_);
}

bool CredentialStore::record_less(const CredentialRecord& a, const CredentialRecord& b) const {
  if (charset_.less(a.password, b.password)) return true;
  if (charset_.less(b.password, a.password)) return false;
  return a.username < b.username;
}

void CredentialStore::check_record(const CredentialRecord& record) const {
  check_password(record.password, charset_);
  if (mode_ == StoreMode::password_only) {
    if (record.username)
      throw Error(Errc::invalid_username, "password-only stores do not hold usernames");
  } else if (!record.username || !valid_username(*record.username)) {
    throw Error(Errc::invalid_username,
                "username must be 1-64 characters of [A-Za-z0-9._@-]");
  }
}

CredentialStore CredentialStore::add(CredentialRecord record) const {
  check_record(record);
  if (mode_ == StoreMode::password_only) {
    if (lookup(record.password))
      throw Error(Errc::duplicate_password, "password already stored");
  } else if (find_user(*record.username)) {
    throw Error(Errc::duplicate_username, "username '" + *record.username + "' already stored");
  }
  CredentialStore next = *this;
  const auto pos = std::upper_bound(
      next.records_.begin(), next.records_.end(), record,
      [this](const CredentialRecord& a, const CredentialRecord& b) { return record_less(a, b); });
  next.records_.insert(pos, std::move(record));
  return next;
}

CredentialStore CredentialStore::remove_password(std::string_view password) const {
  CredentialStore next = *this;
  const auto removed = std::erase_if(
      next.records_, [&](const CredentialRecord& r) { return r.password == password; });
  if (removed == 0) throw Error(Errc::not_found, "password not found");
  return next;
}

CredentialStore CredentialStore::remove_user(std::string_view username) const {
  CredentialStore next = *this;
  const auto removed = std::erase_if(
      next.records_, [&](const CredentialRecord& r) { return r.username == username; });
  if (removed == 0) throw Error(Errc::not_found, "user '" + std::string(username) + "' not found");
  return next;
}

bool CredentialStore::lookup(std::string_view password) const {
  const auto pos = std::lower_bound(
      records_.begin(), records_.end(), password,
      [this](const CredentialRecord& r, std::string_view pw) { return charset_.less(r.password, pw); });
  return pos != records_.end() && pos->password == password;
}

const CredentialRecord* CredentialStore::find_user(std::string_view username) const {
  const auto it = std::find_if(records_.begin(), records_.end(),
                               [&](const CredentialRecord& r) { return r.username == username; });
  return it == records_.end() ? nullptr : &*it;
}

std::string CredentialStore::serialize() const {
  std::ostringstream out;
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "charset " << charset_.id() << ' ' << charset_.chars() << '\n';
  out << "mode " << to_string(mode_) << '\n';
  for (const auto& r : records_) {
    out << "record ";
    if (r.username) out << *r.username << ' ';
    out << r.password << '\n';
  }
  return out.str();
}

CredentialStore CredentialStore::parse(std::string_view text,
                                       const std::optional<CharacterSet>& expected) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++line_no;
      std::string_view line = text.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty() && line.front() != '#') lines.emplace_back(line_no, line);
      pos = end + 1;
    }
  }

  auto header = [&](std::size_t i, std::string_view key, std::size_t arity) {
    if (i >= lines.size()) parse_fail(i + 1, key, "missing header line");
    const auto fields = split_fields(lines[i].second);
    if (fields.empty() || fields[0] != key)
      parse_fail(lines[i].first, key, "expected '" + std::string(key) + "' line");
    if (fields.size() != arity)
      parse_fail(lines[i].first, key, "expected " + std::to_string(arity - 1) + " value(s)");
    return fields;
  };

  const auto magic = header(0, kMagic, 2);
  if (magic[1] != std::to_string(kFormatVersion))
    parse_fail(lines[0].first, "format-version", "unsupported version '" + std::string(magic[1]) + "'");

  const auto cs = header(1, "charset", 3);
  CharacterSet charset{std::string(cs[1]), std::string(cs[2])};
  if (auto violation = validate(charset))
    parse_fail(lines[1].first, "charset", std::string(to_string(violation->rule)) + ": " + violation->message);
  if (expected && !(*expected == charset))
    throw Error(Errc::charset_mismatch, "store charset '" + charset.id() +
                                            "' does not match expected charset '" +
                                            expected->id() + "'");

  const auto md = header(2, "mode", 2);
  StoreMode mode;
  if (md[1] == "password-only")
    mode = StoreMode::password_only;
  else if (md[1] == "username-scoped")
    mode = StoreMode::username_scoped;
  else
    parse_fail(lines[2].first, "mode", "unknown mode '" + std::string(md[1]) + "'");

  CredentialStore store(charset, mode);
  std::set<std::string, std::less<>> usernames;
  const std::size_t arity = mode == StoreMode::password_only ? 2 : 3;
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const auto [line_no, line] = lines[i];
    const auto fields = split_fields(line);
    const std::string record_name = "record " + std::to_string(i - 2);
    if (fields.empty() || fields[0] != "record") parse_fail(line_no, "record", "expected 'record' line");
    if (fields.size() != arity)
      parse_fail(line_no, record_name, "expected " + std::to_string(arity - 1) + " value(s) in " +
                                           std::string(to_string(mode)) + " mode");
    CredentialRecord record;
    if (mode == StoreMode::username_scoped) record.username = std::string(fields[1]);
    record.password = std::string(fields.back());
    try {
      store.check_record(record);
    } catch (const Error& e) {
      parse_fail(line_no, record_name, std::string(to_string(e.code())) + ": " + e.what());
    }
    if (!store.records_.empty()) {
      const auto& prev = store.records_.back();
      if (store.record_less(record, prev))
        throw Error(Errc::unsorted_file, "line " + std::to_string(line_no) + ": " + record_name +
                                             " is out of order");
      if (!store.record_less(prev, record) ||
          (mode == StoreMode::password_only && prev.password == record.password))
        parse_fail(line_no, record_name, "duplicate record");
    }
    if (record.username && !usernames.insert(*record.username).second)
      parse_fail(line_no, record_name, "duplicate username '" + *record.username + "'");
    store.records_.push_back(std::move(record));
  }
  return store;
}

void CredentialStore::save(const std::filesystem::path& path) const {
  const std::string data = serialize();
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + random_token(6);
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, S_IRUSR | S_IWUSR);
  if (fd < 0) throw Error(Errc::io_error, "cannot create " + tmp.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, data, tmp.string());
    if (::fsync(fd) != 0) throw Error(Errc::io_error, "fsync " + tmp.string() + ": " + std::strerror(errno));
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    const int err = errno;
    ::unlink(tmp.c_str());
    throw Error(Errc::io_error, "rename to " + path.string() + ": " + std::strerror(err));
  }
}

CredentialStore CredentialStore::load(const std::filesystem::path& path,
                                      const std::optional<CharacterSet>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(Errc::io_error, "cannot read " + path.string());
  return parse(buf.str(), expected);
}

StoreHandle::StoreHandle(CredentialStore initial, std::optional<std::filesystem::path> path)
    : current_(std::make_shared<const CredentialStore>(std::move(initial))), path_(std::move(path)) {}

std::shared_ptr<StoreHandle> StoreHandle::open(const std::filesystem::path& path,
                                               const std::optional<CharacterSet>& expected) {
  return std::make_shared<StoreHandle>(CredentialStore::load(path, expected), path);
}

std::shared_ptr<const CredentialStore> StoreHandle::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

void StoreHandle::replace(CredentialStore next) {
  std::lock_guard writer(write_mutex_);
  publish_locked(std::move(next));
}

void StoreHandle::publish_locked(CredentialStore next) {
  if (path_) next.save(*path_);
  auto fresh = std::make_shared<const CredentialStore>(std::move(next));
  std::lock_guard lock(snapshot_mutex_);
  current_ = std::move(fresh);
}

}  // namespace gridpass
