#pragma once

#include <cstdint>
#include <vector>

#include "cryptompress/cipher.hpp"

namespace cryptompress::analysis {

inline constexpr int kMaxRestrictedBits = 24;

/// A known (key, plaintext, ciphertext) triple the brute-force demo attacks.
struct Scenario {
  KeyChain chain;
  Block30 plaintext;
  CipherGrid grid;
};

Scenario make_scenario(std::uint64_t seed);

struct AttackReport {
  // Unknown bits of the final ciphertext state: the restricted base-key bits
  // plus 32 per sticky key appended during the run.
  int keyspace_bits = 0;
  std::uint64_t attempts_made = 0;
  std::uint64_t failures = 0;
  std::uint64_t hardenings_triggered = 0;
  double elapsed_seconds = 0.0;
  // The attacker found a candidate that passes every integrity check.
  bool success = false;
  // ...and that candidate really reproduces the plaintext.
  bool plaintext_recovered = false;
  int final_key_bits = kBaseKeyBits;
};

/// Enumerates candidate base keys that differ from the true key only in its
/// `restricted_bits` least significant bits, counting up from zero. Every
/// `harden_every` failures (0 = never) the defender hardens the ciphertext and
/// the attacker restarts its enumeration against the new state. Sticky keys
/// appended by hardening are handed to the attacker so the toy keyspace stays
/// searchable; the run stops after `max_attempts` (0 = 2^(restricted_bits+1)).
/// Throws InvalidKeyspace if restricted_bits is outside 1..24.
AttackReport bruteforce_demo(const Scenario& scenario, int restricted_bits, std::uint64_t harden_every,
                             std::uint64_t entropy_seed, std::uint64_t max_attempts = 0);

struct RatioEntry {
  int symbols = kBlockSymbols;
  int sm_events = 0;
  int compressed_bits = 0;  // wire size of the RM, SM and TM cells
  double ratio = 0.0;       // compressed_bits / 30
};

struct RatioReport {
  std::vector<RatioEntry> entries;
  double mean_sm_events = 0.0;
  double mean_compressed_bits = 0.0;
  double mean_ratio = 0.0;
};

RatioReport compression_stats(const std::vector<Block30>& inputs, const AddSubMatrix& asm_table);

// Blocks whose symbol stream repeats the previous symbol with probability
// `repeat_probability`.
std::vector<Block30> run_biased_blocks(std::size_t count, double repeat_probability, std::uint64_t seed);
std::vector<Block30> uniform_blocks(std::size_t count, std::uint64_t seed);

struct AvalancheSummary {
  int samples = 0;
  double mean = 0.0;
  int min = 0;
  int max = 0;
  std::vector<int> distances;
};

// Bit-level Hamming distance between two serialized grids; the shorter
// encoding is zero-extended.
int grid_distance(const CipherGrid& a, const CipherGrid& b);

// Throws ValueOutOfRange if samples < 100.
AvalancheSummary avalanche_test(int samples, const KeyChain& chain, std::uint64_t seed);

}  // namespace cryptompress::analysis
