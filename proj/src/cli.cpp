#include "cryptompress/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "cryptompress/analysis.hpp"
#include "cryptompress/cipher.hpp"
#include "cryptompress/container.hpp"
#include "cryptompress/error.hpp"

namespace cryptompress::cli {

namespace {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes next to the destination, then renames over it.
void write_file_atomic(const std::string& path, std::span<const std::uint8_t> bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path + ": " + ec.message());
}

std::unique_ptr<EntropySource> make_entropy(const std::optional<std::uint64_t>& seed) {
  if (seed) return std::make_unique<SeededEntropy>(*seed);
  return std::make_unique<SystemEntropy>();
}

json cell_json(const GridCell& cell) {
  json j;
  j["tag"] = std::string(std::array{"empty", "asm", "rm", "sm", "tm"}[cell.index()]);
  j["text"] = to_string(cell);
  return j;
}

json grid_json(const CipherGrid& grid) {
  json j;
  j["orders"] = json::array();
  for (auto o : grid.orders) j["orders"].push_back(order_string(o));
  j["sticky_rounds"] = grid.sticky_rounds;
  j["rows"] = json::array();
  for (const auto& row : grid.cells.rows) {
    json r = json::array();
    for (const auto& cell : row) r.push_back(cell_json(cell));
    j["rows"].push_back(r);
  }
  return j;
}

void print_grid(std::ostream& out, const CipherGrid& grid) {
  out << std::left << std::setw(8) << "Order";
  for (const char* name : {"ASM (hort.)", "ASM (vert.)", "RM", "SM", "TM"}) out << std::setw(22) << name;
  out << '\n';
  for (int row = 0; row < kGridRows; ++row) {
    out << std::setw(8) << order_string(grid.orders[static_cast<std::size_t>(row)]);
    for (const auto& cell : grid.cells.rows[static_cast<std::size_t>(row)]) out << std::setw(22) << to_string(cell);
    out << '\n';
  }
  out << std::right;
}

std::string join(const std::vector<Prime>& cells) {
  std::string s;
  for (Prime p : cells) {
    if (!s.empty()) s += ' ';
    s += std::to_string(value(p));
  }
  return s;
}

json primes_json(const std::vector<Prime>& cells) {
  json a = json::array();
  for (Prime p : cells) a.push_back(value(p));
  return a;
}

Block30 parse_block_hex(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 16);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--block", "not a hexadecimal number: " + text);
  }
  if (used != text.size()) throw CLI::ValidationError("--block", "not a hexadecimal number: " + text);
  if (v >= (1ull << kBlockBits)) throw CLI::ValidationError("--block", "value exceeds 30 bits");
  return Block30(static_cast<std::uint32_t>(v));
}

int trace_command(const std::string& key_path, const std::string& block_text, bool as_json, std::ostream& out) {
  const KeyChain chain = read_key(read_file(key_path));
  const ParsedKey key = parse_key(chain.base);
  const Block30 block = parse_block_hex(block_text);
  const SymbolBlock symbols = map_bits_to_symbols(block);

  std::vector<TraceStep> steps;
  const CompressedBlock cb = compress_block(symbols, key.asm_table, &steps);

  if (as_json) {
    json j;
    j["block"] = block.to_bit_string();
    j["symbols"] = primes_json({symbols.begin(), symbols.end()});
    j["asm"] = json::array();
    for (Prime t : kPrimes) {
      json row;
      row["order"] = order_string(key.asm_table.order(t));
      row["deltas"] = json::array();
      for (Prime c : kPrimes) row["deltas"].push_back(t == c ? json("X") : json(key.asm_table.delta(t, c)));
      j["asm"].push_back(row);
    }
    j["steps"] = json::array();
    for (const auto& s : steps) {
      j["steps"].push_back({{"target", value(s.target)},
                            {"seq", s.seq},
                            {"value", s.value},
                            {"absorbed", s.absorbed},
                            {"left", primes_json(s.left)},
                            {"right", primes_json(s.right)}});
    }
    for (Prime p : kPrimes) {
      const std::string name = std::to_string(value(p));
      j["rm"][name] = cb.rm[p] ? json(*cb.rm[p]) : json(nullptr);
      j["sm"][name] = json::array();
      for (const auto& e : cb.sm[p]) j["sm"][name].push_back({e.seq, e.redundant});
    }
    j["tm"] = json::array();
    for (const auto& slot : cb.tm.slots) {
      j["tm"].push_back(slot ? json::array({value(slot->prime), slot->last_seq}) : json(nullptr));
    }
    out << j.dump(2) << '\n';
    return kOk;
  }

  out << "Block  " << block.to_bit_string() << '\n' << "Primes " << to_string(symbols) << "\n\n";
  out << "Add-sub matrix\nOrder  Target      2     3     5     7\n";
  for (Prime t : kPrimes) {
    out << order_string(key.asm_table.order(t)) << "   " << std::setw(6) << value(t);
    for (Prime c : kPrimes) {
      if (t == c) {
        out << std::setw(6) << "X";
      } else {
        const int d = key.asm_table.delta(t, c);
        out << std::setw(6) << (d > 0 ? "+1" : "-1");
      }
    }
    out << '\n';
  }
  out << "\nCompression sequence\n";
  for (const auto& s : steps) {
    std::ostringstream label;
    label << value(s.target) << '.' << s.seq;
    std::string line = join(s.left);
    if (!line.empty()) line += ' ';
    line += "[" + std::to_string(s.value) + "]";
    if (!s.right.empty()) line += ' ' + join(s.right);
    out << std::left << std::setw(7) << label.str() << std::right << line;
    if (s.right.empty()) out << "   <- saved in RM";
    out << '\n';
  }
  out << "\nTarget  SM                          RM    TM\n";
  for (int slot = 0; slot < kGridRows; ++slot) {
    const Prime p = prime_at(slot);
    std::string sm;
    for (const auto& e : cb.sm[p]) {
      if (!sm.empty()) sm += " ; ";
      sm += std::to_string(e.seq) + " " + std::to_string(e.redundant);
    }
    const auto& tm = cb.tm.slots[static_cast<std::size_t>(slot)];
    out << std::left << std::setw(8) << value(p) << std::setw(28) << (sm.empty() ? "-" : sm) << std::setw(6)
        << (cb.rm[p] ? std::to_string(*cb.rm[p]) : "-")
        << (tm ? std::to_string(value(tm->prime)) + " " + std::to_string(tm->last_seq) : "-") << std::right << '\n';
  }
  return kOk;
}

struct AnalyzeOptions {
  std::uint64_t seed = 1;
  int bits = 16;
  std::uint64_t harden_every = 1000;
  int pairs = 1;
  int samples = 1000;
  double repeat = 0.8;
  std::string key_path;
  std::string format = "json";
};

int analyze_bruteforce(const AnalyzeOptions& o, std::ostream& out) {
  json runs = json::array();
  std::ostringstream csv;
  csv << "seed,mode,keyspace_bits,attempts,failures,hardenings,success,plaintext_recovered,final_key_bits,"
         "elapsed_s\n";
  for (int i = 0; i < o.pairs; ++i) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    const analysis::Scenario scenario = analysis::make_scenario(seed);
    for (const auto& [mode, every] : {std::pair{"baseline", std::uint64_t{0}}, std::pair{"hardened", o.harden_every}}) {
      const auto r = analysis::bruteforce_demo(scenario, o.bits, every, seed);
      runs.push_back({{"seed", seed},
                      {"mode", mode},
                      {"keyspace_bits", r.keyspace_bits},
                      {"attempts", r.attempts_made},
                      {"failures", r.failures},
                      {"hardenings", r.hardenings_triggered},
                      {"success", r.success},
                      {"plaintext_recovered", r.plaintext_recovered},
                      {"final_key_bits", r.final_key_bits},
                      {"elapsed_s", r.elapsed_seconds}});
      csv << seed << ',' << mode << ',' << r.keyspace_bits << ',' << r.attempts_made << ',' << r.failures << ','
          << r.hardenings_triggered << ',' << r.success << ',' << r.plaintext_recovered << ',' << r.final_key_bits
          << ',' << r.elapsed_seconds << '\n';
    }
  }
  if (o.format == "csv") {
    out << csv.str();
  } else {
    out << json{{"bruteforce", runs}}.dump(2) << '\n';
  }
  return kOk;
}

AddSubMatrix analysis_asm(const AnalyzeOptions& o) {
  if (o.key_path.empty()) return build_asm({0x2, 0x3, 0x5, 0x7});
  return parse_key(read_key(read_file(o.key_path)).base).asm_table;
}

int analyze_compression(const AnalyzeOptions& o, std::ostream& out) {
  const AddSubMatrix asm_table = analysis_asm(o);
  const auto n = static_cast<std::size_t>(o.samples);
  const auto uniform = analysis::compression_stats(analysis::uniform_blocks(n, o.seed), asm_table);
  const auto biased = analysis::compression_stats(analysis::run_biased_blocks(n, o.repeat, o.seed), asm_table);
  if (o.format == "csv") {
    out << "population,samples,mean_sm_events,mean_compressed_bits,mean_ratio\n";
    out << "uniform," << n << ',' << uniform.mean_sm_events << ',' << uniform.mean_compressed_bits << ','
        << uniform.mean_ratio << '\n';
    out << "run_biased," << n << ',' << biased.mean_sm_events << ',' << biased.mean_compressed_bits << ','
        << biased.mean_ratio << '\n';
  } else {
    auto summary = [&](const analysis::RatioReport& r) {
      return json{{"samples", n},
                  {"mean_sm_events", r.mean_sm_events},
                  {"mean_compressed_bits", r.mean_compressed_bits},
                  {"mean_ratio", r.mean_ratio}};
    };
    out << json{{"uniform", summary(uniform)}, {"run_biased", summary(biased)}, {"repeat_probability", o.repeat}}.dump(2)
        << '\n';
  }
  return kOk;
}

int analyze_avalanche(const AnalyzeOptions& o, std::ostream& out) {
  KeyChain chain;
  if (o.key_path.empty()) {
    chain.base = BaseKey::from_hex("2357324A9153DCB55124327812345678");
  } else {
    chain = read_key(read_file(o.key_path));
  }
  const auto s = analysis::avalanche_test(o.samples, chain, o.seed);
  if (o.format == "csv") {
    out << "samples,mean,min,max\n" << s.samples << ',' << s.mean << ',' << s.min << ',' << s.max << '\n';
  } else {
    out << json{{"samples", s.samples}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}}.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cryptompress block cipher: keys, encryption, hardening and analysis", "cryptompress"};
  app.require_subcommand(1, 1);

  std::string key_path, in_path, out_path, cipher_path, block_hex;
  bool as_json = false;
  std::optional<std::uint64_t> seed;

  auto* keygen = app.add_subcommand("keygen", "Generate a fresh 128-bit key file");
  keygen->add_option("--out", out_path, "Key file to write")->required();
  keygen->add_option("--seed", seed, "Deterministic seed (testing only)");

  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file");
  encrypt->add_option("--key", key_path)->required();
  encrypt->add_option("--in", in_path)->required();
  encrypt->add_option("--out", out_path)->required();

  auto* decrypt = app.add_subcommand("decrypt", "Decrypt a cipher file");
  decrypt->add_option("--key", key_path)->required();
  decrypt->add_option("--in", in_path)->required();
  decrypt->add_option("--out", out_path)->required();

  auto* harden_cmd = app.add_subcommand("harden", "Append a sticky key and rewrite the ciphertext SM cells");
  harden_cmd->add_option("--key", key_path)->required();
  harden_cmd->add_option("--cipher", cipher_path)->required();
  harden_cmd->add_option("--seed", seed, "Deterministic seed (testing only)");

  auto* inspect = app.add_subcommand("inspect", "Render the grids of a cipher file");
  inspect->add_option("--cipher", cipher_path)->required();
  inspect->add_flag("--json", as_json);

  auto* trace = app.add_subcommand("trace", "Show the compression sequence of one block");
  trace->add_option("--key", key_path)->required();
  trace->add_option("--block", block_hex, "30-bit block as hexadecimal")->required();
  trace->add_flag("--json", as_json);

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand("analyze", "Measurement harness");
  analyze->require_subcommand(1, 1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", ao.seed, "Base seed");
    sub->add_option("--format", ao.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto* bf = analyze->add_subcommand("bruteforce", "Toy brute-force search with and without hardening");
  add_common(bf);
  bf->add_option("--bits", ao.bits, "Unknown key bits (1..24)");
  bf->add_option("--harden-every", ao.harden_every, "Failures between hardenings");
  bf->add_option("--pairs", ao.pairs, "Number of paired seeds")->check(CLI::PositiveNumber);
  auto* cs = analyze->add_subcommand("compression", "SM event counts for uniform vs run-heavy blocks");
  add_common(cs);
  cs->add_option("--samples", ao.samples)->check(CLI::PositiveNumber);
  cs->add_option("--repeat", ao.repeat, "Repeat probability of the run-heavy source")->check(CLI::Range(0.0, 1.0));
  cs->add_option("--key", ao.key_path, "Key file supplying the add-sub orders");
  auto* av = analyze->add_subcommand("avalanche", "Ciphertext distance after a one-bit plaintext flip");
  add_common(av);
  av->add_option("--samples", ao.samples)->check(CLI::Range(100, 10000000));
  av->add_option("--key", ao.key_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*keygen) {
      auto entropy = make_entropy(seed);
      const auto bytes = write_key(KeyChain{generate_key(*entropy), {}});
      write_file_atomic(out_path, bytes);
      return kOk;
    }
    if (*encrypt) {
      const KeyChain chain = read_key(read_file(key_path));
      const auto payload = read_file(in_path);
      const PaddedMessage msg = segment_message(payload);
      CipherFile file;
      file.sticky_rounds = static_cast<int>(chain.sticky.size());
      file.tail_bits = msg.tail_bits;
      file.blocks.reserve(msg.blocks.size());
      for (const Block30& b : msg.blocks) file.blocks.push_back(encrypt_block(b, chain));
      write_file_atomic(out_path, write_cipher(file));
      return kOk;
    }
    if (*decrypt) {
      const KeyChain chain = read_key(read_file(key_path));
      const CipherFile file = read_cipher(read_file(in_path));
      PaddedMessage msg;
      msg.tail_bits = file.tail_bits;
      msg.blocks.reserve(file.blocks.size());
      for (const CipherGrid& g : file.blocks) msg.blocks.push_back(decrypt_block(g, chain));
      write_file_atomic(out_path, reassemble_message(msg));
      return kOk;
    }
    if (*harden_cmd) {
      const KeyChain chain = read_key(read_file(key_path));
      CipherFile file = read_cipher(read_file(cipher_path));
      auto entropy = make_entropy(seed);
      const KeyChain extended = harden(file.blocks, chain, *entropy);
      file.sticky_rounds += 1;
      const auto key_bytes = write_key(extended);
      const auto cipher_bytes = write_cipher(file);
      write_file_atomic(cipher_path, cipher_bytes);
      write_file_atomic(key_path, key_bytes);
      out << "key is now " << extended.effective_bits() << " bits (" << extended.sticky.size() << " sticky)\n";
      return kOk;
    }
    if (*inspect) {
      const CipherFile file = read_cipher(read_file(cipher_path));
      if (as_json) {
        json j{{"sticky_rounds", file.sticky_rounds}, {"tail_bits", file.tail_bits}, {"blocks", json::array()}};
        for (const auto& g : file.blocks) j["blocks"].push_back(grid_json(g));
        out << j.dump(2) << '\n';
      } else {
        out << file.blocks.size() << " block(s), " << file.sticky_rounds << " sticky round(s), tail " << file.tail_bits
            << " bits\n";
        for (std::size_t i = 0; i < file.blocks.size(); ++i) {
          out << "\nblock " << i << '\n';
          print_grid(out, file.blocks[i]);
        }
      }
      return kOk;
    }
    if (*trace) return trace_command(key_path, block_hex, as_json, out);
    if (*analyze) {
      if (*bf) return analyze_bruteforce(ao, out);
      if (*cs) return analyze_compression(ao, out);
      if (*av) return analyze_avalanche(ao, out);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::IntegrityFailure:
      case ErrorCode::RoundCountMismatch:
        return kIntegrity;
      case ErrorCode::InvalidKeyspace:
        return kUsage;
      default:
        return kIoOrFormat;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrFormat;
  }
  return kUsage;
}

}  // namespace cryptompress::cli
