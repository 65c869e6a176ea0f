#pragma once

// Lower-bound certificates: a claim M(n,d) >= size bound to the SHA-256 of a
// canonicalized array file and re-verifiable from that file alone.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "permcontract/error.hpp"
#include "permcontract/gf.hpp"
#include "permcontract/perm.hpp"

namespace permcontract {

/// ClaimRefuted carrying the offending pair.
class ClaimRefutedError : public Error {
 public:
  ClaimRefutedError(const HdWitness& w, const std::string& msg) : Error(ErrorKind::ClaimRefuted, msg), witness_(w) {}
  const HdWitness& witness() const { return witness_; }

 private:
  HdWitness witness_;
};

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    fail(ErrorKind::VerificationFailed, "SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

/// Header line, then the row lines sorted, each newline-terminated. Row order
/// in the file does not change the result; any edit to a row does.
inline std::string canonical_parr_bytes(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (lines.empty()) fail(ErrorKind::ParseError, "empty array file");
  std::sort(lines.begin() + 1, lines.end());
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Certificate {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t size = 0;
  std::size_t min_hd = 0;
  std::string method;
  std::optional<gf::FieldSpec> field;
  std::optional<std::uint64_t> seed;
  std::string hash_hex;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    j["size"] = size;
    j["min_hd"] = min_hd;
    j["method"] = method;
    if (field) {
      std::vector<std::uint32_t> mod(field->modulus.begin(), field->modulus.end());
      j["field"] = {{"p", field->p}, {"m", field->m}, {"modulus", mod}};
    } else {
      j["field"] = nullptr;
    }
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["hash_hex"] = hash_hex;
    return j;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }

  static Certificate from_json(const nlohmann::json& j) {
    try {
      Certificate c;
      c.n = j.at("n").get<std::size_t>();
      c.d = j.at("d").get<std::size_t>();
      c.size = j.at("size").get<std::size_t>();
      c.min_hd = j.at("min_hd").get<std::size_t>();
      c.method = j.at("method").get<std::string>();
      if (!j.at("field").is_null()) {
        const auto& f = j.at("field");
        gf::FieldSpec s;
        s.p = f.at("p").get<std::uint64_t>();
        s.m = f.at("m").get<unsigned>();
        for (auto x : f.at("modulus")) s.modulus.push_back(x.get<std::uint32_t>());
        c.field = s;
      }
      if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
      c.hash_hex = j.at("hash_hex").get<std::string>();
      return c;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::ParseError, std::string("bad certificate: ") + e.what());
    }
  }

  static Certificate parse(std::string_view text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::ParseError, std::string("bad certificate: ") + e.what());
    }
    return from_json(j);
  }

  bool operator==(const Certificate&) const = default;
};

struct IssueMeta {
  std::string method = "external";
  std::optional<gf::FieldSpec> field;
  std::optional<std::uint64_t> seed;
};

namespace detail {

/// Exhaustive minimum distance of parsed rows; a single row is vacuously at
/// distance n.
inline HdWitness verify_rows(const ParrRows& rows) {
  if (rows.rows.size() < 2) return HdWitness{rows.n, 0, 0};
  return hd_rows(rows.rows);
}

inline void refute_if_below(const HdWitness& w, std::size_t d) {
  if (w.min_hd < d)
    throw ClaimRefutedError(w, "rows " + std::to_string(w.first) + " and " + std::to_string(w.second) + " are at distance " +
                                   std::to_string(w.min_hd) + " < " + std::to_string(d));
}

}  // namespace detail

/// Certificate for the array text, issued only if its minimum distance is at
/// least d.
inline Certificate issue_text(std::string_view text, std::size_t n, std::size_t d, const IssueMeta& meta = {}) {
  std::istringstream is{std::string(text)};
  ParrRows rows = read_parr_rows(is);
  if (rows.n != n) fail(ErrorKind::ParseError, "array has " + std::to_string(rows.n) + " symbols, claim is for " + std::to_string(n));
  HdWitness w = detail::verify_rows(rows);
  detail::refute_if_below(w, d);
  Certificate c;
  c.n = n;
  c.d = d;
  c.size = rows.rows.size();
  c.min_hd = w.min_hd;
  c.method = meta.method;
  c.field = meta.field;
  c.seed = meta.seed;
  c.hash_hex = sha256_hex(canonical_parr_bytes(text));
  return c;
}

inline Certificate issue(const std::string& path, std::size_t n, std::size_t d, const IssueMeta& meta = {}) {
  return issue_text(read_text_file(path), n, d, meta);
}

/// Hash match plus full re-verification of the array against the claim.
inline bool recheck_text(const Certificate& c, std::string_view text) {
  if (sha256_hex(canonical_parr_bytes(text)) != c.hash_hex) fail(ErrorKind::HashMismatch, "array bytes do not match the certificate");
  std::istringstream is{std::string(text)};
  ParrRows rows = read_parr_rows(is);
  if (rows.n != c.n) fail(ErrorKind::ParseError, "symbol count differs from the certificate");
  HdWitness w = detail::verify_rows(rows);
  detail::refute_if_below(w, c.d);
  if (rows.rows.size() != c.size) throw ClaimRefutedError(w, "array has " + std::to_string(rows.rows.size()) + " rows, certificate claims " + std::to_string(c.size));
  if (w.min_hd != c.min_hd) throw ClaimRefutedError(w, "recorded minimum distance " + std::to_string(c.min_hd) + " but found " + std::to_string(w.min_hd));
  return true;
}

inline bool recheck(const Certificate& c, const std::string& array_path) { return recheck_text(c, read_text_file(array_path)); }

inline Certificate read_certificate(const std::string& path) { return Certificate::parse(read_text_file(path)); }

}  // namespace permcontract
