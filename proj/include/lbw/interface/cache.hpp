#pragma once

#include <openssl/evp.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include <nlohmann/json.hpp>

#include "lbw/error.hpp"

namespace lbw {

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

/// Content-addressed store of report bodies, one JSON file per key.
///
/// Entries carry their key and a digest of the stored value; anything that
/// fails to parse or verify is reported through the warning sink, removed,
/// and treated as a miss. Writes go to a temporary file that is renamed into
/// place. Any I/O failure switches the cache off for the rest of the run.
class ResultCache {
 public:
  using Json = nlohmann::ordered_json;
  using WarningSink = std::function<void(std::string const&)>;

  explicit ResultCache(std::filesystem::path dir, WarningSink warn = default_warning)
      : dir_(std::move(dir)), warn_(std::move(warn)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      disable("cannot create cache directory '" + dir_.string() + "'");
    }
  }

  static void default_warning(std::string const& msg) { std::cerr << "lbw: warning: " << msg << "\n"; }

  bool enabled() const { return enabled_; }
  std::filesystem::path const& directory() const { return dir_; }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

  std::filesystem::path path_for(std::string const& key) const { return dir_ / (key + ".json"); }

  std::optional<Json> get(std::string const& key) {
    std::lock_guard lock(mutex_);
    if (!enabled_) {
      return std::nullopt;
    }
    auto const path = path_for(key);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
      ++misses_;
      return std::nullopt;
    }
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in.good() && !in.eof()) {
      disable("cannot read cache entry '" + path.string() + "'");
      return std::nullopt;
    }
    try {
      auto entry = Json::parse(ss.str());
      auto const& value = entry.at("value");
      if (entry.at("key").get<std::string>() != key ||
          entry.at("sha256").get<std::string>() != sha256_hex(value.dump())) {
        throw Error("checksum mismatch");
      }
      ++hits_;
      return std::optional<Json>(std::in_place, value);
    } catch (std::exception const&) {
      warn_("corrupt cache entry '" + path.string() + "' discarded; recomputing");
      std::filesystem::remove(path, ec);
      ++misses_;
      return std::nullopt;
    }
  }

  void put(std::string const& key, Json const& value) {
    std::lock_guard lock(mutex_);
    if (!enabled_) {
      return;
    }
    Json entry;
    entry["key"] = key;
    entry["sha256"] = sha256_hex(value.dump());
    entry["value"] = value;
    auto const path = path_for(key);
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << entry.dump() << '\n';
      out.close();
      if (!out) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        disable("cannot write cache entry '" + path.string() + "'");
        return;
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      disable("cannot install cache entry '" + path.string() + "'");
    }
  }

 private:
  void disable(std::string const& why) {
    if (enabled_) {
      warn_(why + "; continuing without the cache");
    }
    enabled_ = false;
  }

  std::filesystem::path dir_;
  WarningSink warn_;
  std::mutex mutex_;
  bool enabled_ = true;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace lbw
