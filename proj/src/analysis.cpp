#include "cryptompress/analysis.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <random>

#include "cryptompress/container.hpp"
#include "cryptompress/error.hpp"

namespace cryptompress::analysis {

namespace {

BaseKey with_low_bits(const BaseKey& key, int bits, std::uint32_t candidate) {
  auto raw = key.bytes();
  for (int i = 0; i < bits; ++i) {
    const std::size_t byte = raw.size() - 1 - static_cast<std::size_t>(i / 8);
    const auto mask = static_cast<std::uint8_t>(1u << (i % 8));
    if ((candidate >> i) & 1u) {
      raw[byte] |= mask;
    } else {
      raw[byte] &= static_cast<std::uint8_t>(~mask);
    }
  }
  return BaseKey(raw);
}

std::vector<std::uint8_t> grid_bytes(const CipherGrid& grid) {
  std::vector<std::uint8_t> out = {static_cast<std::uint8_t>((grid.orders[0] << 4) | grid.orders[1]),
                                   static_cast<std::uint8_t>((grid.orders[2] << 4) | grid.orders[3])};
  const auto cells = encode_cells(grid.cells);
  out.insert(out.end(), cells.begin(), cells.end());
  return out;
}

}  // namespace

Scenario make_scenario(std::uint64_t seed) {
  SeededEntropy entropy(seed);
  Scenario s;
  s.chain.base = generate_key(entropy);
  s.plaintext = Block30(entropy.next_u32() & ((1u << kBlockBits) - 1));
  s.grid = encrypt_block(s.plaintext, s.chain);
  return s;
}

AttackReport bruteforce_demo(const Scenario& scenario, int restricted_bits, std::uint64_t harden_every,
                             std::uint64_t entropy_seed, std::uint64_t max_attempts) {
  if (restricted_bits < 1 || restricted_bits > kMaxRestrictedBits) {
    throw Error(ErrorCode::InvalidKeyspace, "restricted bits must be in 1..24");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t space = std::uint64_t{1} << restricted_bits;
  if (max_attempts == 0) max_attempts = 2 * space;

  SeededEntropy entropy(entropy_seed);
  CipherGrid grid = scenario.grid;
  KeyChain defender = scenario.chain;

  AttackReport report;
  std::uint64_t candidate = 0;
  while (report.attempts_made < max_attempts && candidate < space) {
    ++report.attempts_made;
    KeyChain guess{with_low_bits(defender.base, restricted_bits, static_cast<std::uint32_t>(candidate)),
                   defender.sticky};
    try {
      const Block30 recovered = decrypt_block(grid, guess);
      report.success = true;
      report.plaintext_recovered = recovered == scenario.plaintext;
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IntegrityFailure) throw;
    }
    ++report.failures;
    if (harden_every != 0 && report.failures % harden_every == 0) {
      std::tie(grid, defender) = harden(grid, defender, entropy);
      ++report.hardenings_triggered;
      candidate = 0;
    } else {
      ++candidate;
    }
  }

  report.keyspace_bits = restricted_bits + kStickyBits * static_cast<int>(report.hardenings_triggered);
  report.final_key_bits = defender.effective_bits();
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RatioReport compression_stats(const std::vector<Block30>& inputs, const AddSubMatrix& asm_table) {
  RatioReport report;
  report.entries.reserve(inputs.size());
  for (const Block30& block : inputs) {
    const CompressedBlock cb = compress_block(map_bits_to_symbols(block), asm_table);
    const CellTable items = to_items(cb, asm_table);

    RatioEntry entry;
    for (const auto& events : cb.sm.events) entry.sm_events += static_cast<int>(events.size());
    CellTable data;
    for (int slot = 0; slot < kGridRows; ++slot) {
      for (MatrixKind kind : {MatrixKind::Rm, MatrixKind::Sm, MatrixKind::Tm}) {
        data.at(kind, slot) = items.at(kind, slot);
      }
    }
    // The ASM columns are key material and stay out of the size; the 8 empty
    // cells left in `data` cost one tag byte each.
    entry.compressed_bits = static_cast<int>((encode_cells(data).size() - 8) * 8);
    entry.ratio = entry.compressed_bits / static_cast<double>(kBlockBits);
    report.entries.push_back(entry);
  }
  if (!report.entries.empty()) {
    const auto n = static_cast<double>(report.entries.size());
    for (const auto& e : report.entries) {
      report.mean_sm_events += e.sm_events / n;
      report.mean_compressed_bits += e.compressed_bits / n;
      report.mean_ratio += e.ratio / n;
    }
  }
  return report;
}

std::vector<Block30> uniform_blocks(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Block30> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(static_cast<std::uint32_t>(rng() & ((1u << kBlockBits) - 1)));
  return out;
}

std::vector<Block30> run_biased_blocks(std::size_t count, double repeat_probability, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution repeat(repeat_probability);
  std::uniform_int_distribution<std::uint32_t> pair(0, 3);
  std::vector<Block30> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t v = 0;
    std::uint32_t prev = pair(rng);
    for (int s = 0; s < kBlockSymbols; ++s) {
      const std::uint32_t sym = (s > 0 && repeat(rng)) ? prev : pair(rng);
      v = (v << 2) | sym;
      prev = sym;
    }
    out.emplace_back(v);
  }
  return out;
}

int grid_distance(const CipherGrid& a, const CipherGrid& b) {
  const auto x = grid_bytes(a);
  const auto y = grid_bytes(b);
  const std::size_t n = std::max(x.size(), y.size());
  int distance = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t u = i < x.size() ? x[i] : 0;
    const std::uint8_t v = i < y.size() ? y[i] : 0;
    distance += std::popcount(static_cast<unsigned>(u ^ v));
  }
  return distance;
}

AvalancheSummary avalanche_test(int samples, const KeyChain& chain, std::uint64_t seed) {
  if (samples < 100) throw Error(ErrorCode::ValueOutOfRange, "avalanche test needs at least 100 samples");
  std::mt19937_64 rng(seed);

  AvalancheSummary summary;
  summary.samples = samples;
  summary.distances.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const Block30 plain(static_cast<std::uint32_t>(rng() & ((1u << kBlockBits) - 1)));
    const Block30 flipped(plain.value() ^ (1u << (rng() % kBlockBits)));
    summary.distances.push_back(grid_distance(encrypt_block(plain, chain), encrypt_block(flipped, chain)));
  }
  const auto [lo, hi] = std::minmax_element(summary.distances.begin(), summary.distances.end());
  summary.min = *lo;
  summary.max = *hi;
  double total = 0.0;
  for (int d : summary.distances) total += d;
  summary.mean = total / samples;
  return summary;
}

}  // namespace cryptompress::analysis
