#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cryptompress/cipher.hpp"
#include "cryptompress/codec.hpp"
#include "cryptompress/engine.hpp"
#include "cryptompress/keyschedule.hpp"

namespace testsupport {

using namespace cryptompress;

// Worked example from the original cipher description.
inline const char* const kExampleKeyHex = "2357324A9153DCB55124327812345678";
// The published bit string prints pair 7 as "10" although the prime row and
// every later table use 7 there; the prime row is taken as authoritative.
inline const char* const kPrintedBits = "10 10 10 11 11 01 10 00 11 10 00 11 11 10 01";
inline const char* const kExampleBits = "10 10 10 11 11 01 11 00 11 10 00 11 11 10 01";
inline constexpr std::uint32_t kExampleBlock = 0x2AF738F9;

inline SymbolBlock symbols(std::initializer_list<int> values) {
  SymbolBlock out{};
  std::size_t i = 0;
  for (int v : values) out[i++] = prime_from_value(v);
  return out;
}

inline std::vector<Prime> prime_vec(std::initializer_list<int> values) {
  std::vector<Prime> out;
  for (int v : values) out.push_back(prime_from_value(v));
  return out;
}

inline KeyChain example_chain() { return KeyChain{BaseKey::from_hex(kExampleKeyHex), {}}; }

inline AddSubMatrix example_asm() { return build_asm({0x2, 0x3, 0x5, 0x7}); }

inline SymbolBlock random_block(std::mt19937_64& rng) {
  SymbolBlock b{};
  for (auto& p : b) p = prime_at(static_cast<int>(rng() & 3u));
  return b;
}

inline Block30 random_block30(std::mt19937_64& rng) {
  return Block30(static_cast<std::uint32_t>(rng() & ((1u << kBlockBits) - 1)));
}

inline AddSubMatrix random_asm(std::mt19937_64& rng) {
  return AddSubMatrix({static_cast<std::uint8_t>(rng() & 0xF), static_cast<std::uint8_t>(rng() & 0xF),
                       static_cast<std::uint8_t>(rng() & 0xF), static_cast<std::uint8_t>(rng() & 0xF)});
}

inline KeyChain random_chain(std::mt19937_64& rng, int sticky) {
  SeededEntropy e(rng());
  KeyChain chain{generate_key(e), {}};
  for (int i = 0; i < sticky; ++i) chain.sticky.push_back(static_cast<std::uint32_t>(rng()));
  return chain;
}

// Closed-form outcome per target, computed without walking a cursor:
// targets are processed in order of first occurrence, and target t crosses
// every cell of a prime that first occurs after t.
struct ClosedForm {
  std::array<bool, 4> present{};
  std::array<long long, 4> outcome{};
};

inline ClosedForm closed_form(const SymbolBlock& block, const AddSubMatrix& table) {
  std::array<int, 4> first{};
  first.fill(-1);
  for (int i = 0; i < kBlockSymbols; ++i) {
    const int idx = index_of(block[static_cast<std::size_t>(i)]);
    if (first[static_cast<std::size_t>(idx)] < 0) first[static_cast<std::size_t>(idx)] = i;
  }
  ClosedForm out;
  for (int t = 0; t < 4; ++t) {
    if (first[static_cast<std::size_t>(t)] < 0) continue;
    out.present[static_cast<std::size_t>(t)] = true;
    const Prime target = prime_at(t);
    long long v = 0;
    for (Prime p : block) {
      const int q = index_of(p);
      if (q == t) {
        v += value(target);
      } else if (first[static_cast<std::size_t>(q)] > first[static_cast<std::size_t>(t)]) {
        // The table is read directly from the order bits here.
        const int bit = (table.orders()[static_cast<std::size_t>(t)] >> (3 - q)) & 1;
        v += bit ? 1 : -1;
      }
    }
    out.outcome[static_cast<std::size_t>(t)] = v;
  }
  return out;
}

inline std::string fixture_path(const std::string& name) { return std::string(CRYPTOMPRESS_FIXTURES) + "/" + name; }

// Non-comment lines of a tab-separated fixture, split into fields.
inline std::vector<std::vector<std::string>> read_tsv(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace testsupport
