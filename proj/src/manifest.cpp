#include <cstdlib>
#include <ctime>

#include <openssl/evp.h>

#include "artopen/error.hpp"
#include "artopen/io.hpp"

namespace artopen {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Io, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string hash_inputs(const std::vector<fs::path>& inputs) {
  // Length-prefix each file so moving bytes across a file boundary changes the hash.
  std::string buf;
  for (const auto& p : inputs) {
    const std::string bytes = read_text(p);
    buf += std::to_string(bytes.size()) + ":" + bytes;
  }
  return sha256_hex(buf);
}

std::string manifest_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0' && v >= 0) t = std::time_t(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const RunManifest& m) {
  return {{"tool", m.tool},         {"version", m.version},     {"command", m.command},
          {"input_hash", m.input_hash}, {"seed", m.seed},      {"timestamp", m.timestamp},
          {"outputs", m.outputs}};
}

}  // namespace artopen
