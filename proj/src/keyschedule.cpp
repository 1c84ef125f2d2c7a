#include "cryptompress/keyschedule.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "cryptompress/error.hpp"

namespace cryptompress {

BaseKey BaseKey::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kBaseKeyBytes) {
    throw Error(ErrorCode::WrongLength, "base key needs 16 bytes, got " + std::to_string(bytes.size()));
  }
  std::array<std::uint8_t, kBaseKeyBytes> raw{};
  std::copy(bytes.begin(), bytes.end(), raw.begin());
  return BaseKey(raw);
}

BaseKey BaseKey::from_hex(std::string_view hex) {
  std::vector<std::uint8_t> nibbles;
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    if (c == '0' && i + 1 < hex.size() && (hex[i + 1] == 'x' || hex[i + 1] == 'X')) {
      ++i;
      continue;
    }
    if (std::isxdigit(static_cast<unsigned char>(c))) {
      nibbles.push_back(static_cast<std::uint8_t>(std::isdigit(static_cast<unsigned char>(c))
                                                      ? c - '0'
                                                      : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10));
    } else if (!std::isspace(static_cast<unsigned char>(c)) && c != '[' && c != ']' && c != '{' && c != '}' &&
               c != ':' && c != '-' && c != '_') {
      throw Error(ErrorCode::ValueOutOfRange, std::string("unexpected character '") + c + "' in key");
    }
  }
  if (nibbles.size() != 2 * kBaseKeyBytes) {
    throw Error(ErrorCode::WrongLength, "base key needs 32 hex digits, got " + std::to_string(nibbles.size()));
  }
  std::array<std::uint8_t, kBaseKeyBytes> raw{};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<std::uint8_t>((nibbles[2 * i] << 4) | nibbles[2 * i + 1]);
  }
  return BaseKey(raw);
}

std::string BaseKey::to_hex() const {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(2 * kBaseKeyBytes);
  for (auto b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::uint8_t BaseKey::nibble(int index) const noexcept {
  const std::uint8_t b = bytes_[static_cast<std::size_t>(index / 2)];
  return (index % 2 == 0) ? static_cast<std::uint8_t>(b >> 4) : static_cast<std::uint8_t>(b & 0xF);
}

void BaseKey::set_nibble(int index, std::uint8_t v) noexcept {
  std::uint8_t& b = bytes_[static_cast<std::size_t>(index / 2)];
  if (index % 2 == 0) {
    b = static_cast<std::uint8_t>((b & 0x0F) | ((v & 0xF) << 4));
  } else {
    b = static_cast<std::uint8_t>((b & 0xF0) | (v & 0xF));
  }
}

bool BaseKey::bit(int index) const noexcept {
  return (bytes_[static_cast<std::size_t>(index / 8)] >> (7 - index % 8)) & 1u;
}

void BaseKey::flip_bit(int index) noexcept {
  bytes_[static_cast<std::size_t>(index / 8)] ^= static_cast<std::uint8_t>(1u << (7 - index % 8));
}

std::uint32_t BaseKey::sm_xor() const noexcept {
  return (static_cast<std::uint32_t>(bytes_[12]) << 24) | (static_cast<std::uint32_t>(bytes_[13]) << 16) |
         (static_cast<std::uint32_t>(bytes_[14]) << 8) | bytes_[15];
}

std::array<std::uint8_t, 4> split_nibbles(std::uint16_t word) noexcept {
  return {static_cast<std::uint8_t>((word >> 12) & 0xF), static_cast<std::uint8_t>((word >> 8) & 0xF),
          static_cast<std::uint8_t>((word >> 4) & 0xF), static_cast<std::uint8_t>(word & 0xF)};
}

std::array<std::uint8_t, 8> split_nibbles(std::uint32_t word) noexcept {
  std::array<std::uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((word >> (28 - 4 * i)) & 0xF);
  return out;
}

AddSubMatrix build_asm(const std::array<std::uint8_t, 4>& orders) { return AddSubMatrix(orders); }

ParsedKey parse_key(const BaseKey& key) {
  ParsedKey parsed;
  parsed.asm_table = build_asm(split_nibbles(key.asm_orders()));
  auto& t = parsed.table.values;
  t[static_cast<std::size_t>(MatrixKind::AsmH)] = split_nibbles(key.asm_horizontal());
  t[static_cast<std::size_t>(MatrixKind::AsmV)] = split_nibbles(key.asm_vertical());
  t[static_cast<std::size_t>(MatrixKind::Rm)] = split_nibbles(key.rm_key());
  t[static_cast<std::size_t>(MatrixKind::Sm)] = split_nibbles(key.sm_arrangement());
  t[static_cast<std::size_t>(MatrixKind::Tm)] = split_nibbles(key.tm_key());
  parsed.subkeys = split_nibbles(key.sm_xor());
  return parsed;
}

ParsedKey parse_key(std::span<const std::uint8_t> raw) { return parse_key(BaseKey::from_bytes(raw)); }

std::uint32_t EntropySource::next_u32() {
  std::array<std::uint8_t, 4> buf{};
  fill(buf);
  return (static_cast<std::uint32_t>(buf[0]) << 24) | (static_cast<std::uint32_t>(buf[1]) << 16) |
         (static_cast<std::uint32_t>(buf[2]) << 8) | buf[3];
}

void SystemEntropy::fill(std::span<std::uint8_t> out) {
  std::ifstream urandom("/dev/urandom", std::ios::binary);
  if (urandom) {
    urandom.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (urandom.gcount() == static_cast<std::streamsize>(out.size())) return;
  }
  try {
    std::random_device rd;
    for (auto& b : out) b = static_cast<std::uint8_t>(rd() & 0xFF);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::EntropyUnavailable, e.what());
  }
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
      out[i] = static_cast<std::uint8_t>(word & 0xFF);
      word >>= 8;
    }
  }
}

BaseKey generate_key(EntropySource& entropy) {
  std::array<std::uint8_t, kBaseKeyBytes> raw{};
  entropy.fill(raw);
  return BaseKey(raw);
}

KeyChain extend_key(KeyChain chain, EntropySource& entropy) {
  chain.sticky.push_back(entropy.next_u32());
  return chain;
}

}  // namespace cryptompress
