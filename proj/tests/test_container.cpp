#include <doctest.h>

#include "cryptompress/container.hpp"
#include "cryptompress/error.hpp"
#include "support.hpp"

using namespace cryptompress;
using namespace testsupport;

namespace {

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::WrongLength;
}

CipherFile random_cipher(std::mt19937_64& rng) {
  const int sticky = static_cast<int>(rng() % 4);
  const KeyChain chain = random_chain(rng, sticky);
  CipherFile file;
  file.sticky_rounds = sticky;
  file.tail_bits = 1 + static_cast<int>(rng() % 30);
  const int blocks = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < blocks; ++i) file.blocks.push_back(encrypt_block(random_block30(rng), chain));
  return file;
}

}  // namespace

TEST_CASE("worked-example key file bytes") {
  const auto bytes = write_key(example_chain());
  const std::vector<std::uint8_t> expected = {0x43, 0x4D, 0x4B, 0x31, 0x00, 0x23, 0x57, 0x32, 0x4A, 0x91, 0x53,
                                              0xDC, 0xB5, 0x51, 0x24, 0x32, 0x78, 0x12, 0x34, 0x56, 0x78};
  CHECK(bytes == expected);
  CHECK(read_key(bytes) == example_chain());
}

TEST_CASE("key file grows by four bytes per sticky key") {
  KeyChain chain = example_chain();
  for (std::uint32_t k = 1; k <= 8; ++k) {
    chain.sticky.push_back(0xDEADBEEF + k);
    const auto bytes = write_key(chain);
    CHECK(bytes.size() == 21 + 4 * k);
    CHECK(bytes[4] == k);
    CHECK(read_key(bytes) == chain);
  }
}

TEST_CASE("cipher file layout of the worked example") {
  CipherFile file;
  file.tail_bits = 30;
  file.blocks.push_back(encrypt_block(Block30(kExampleBlock), example_chain()));
  const auto bytes = write_cipher(file);
  REQUIRE(bytes.size() > 13);
  CHECK(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 13) ==
        std::vector<std::uint8_t>{'C', 'M', 'C', '1', 1, 0, 0, 0, 0, 1, 30, 0x23, 0x57});
  // First cell (row 2, ASM hort.) holds the string -1+1+1X: tag 1, X at 3, signs 0110.
  CHECK(std::vector<std::uint8_t>(bytes.begin() + 13, bytes.begin() + 16) == std::vector<std::uint8_t>{1, 3, 0x6});
  CHECK(read_cipher(bytes) == file);
}

TEST_CASE("round-trip of random key chains and ciphertexts") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const KeyChain chain = random_chain(rng, static_cast<int>(rng() % 10));
    CHECK(read_key(write_key(chain)) == chain);
    const CipherFile file = random_cipher(rng);
    CHECK(read_cipher(write_cipher(file)) == file);
  }
}

TEST_CASE("every truncation is a Truncated error") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 20; ++i) {
    const auto key = write_key(random_chain(rng, static_cast<int>(rng() % 3)));
    for (std::size_t n = 0; n < key.size(); ++n) {
      CHECK(error_of([&] { read_key(std::span(key).first(n)); }) == ErrorCode::Truncated);
    }
    const auto cipher = write_cipher(random_cipher(rng));
    for (std::size_t n = 0; n < cipher.size(); ++n) {
      CHECK(error_of([&] { read_cipher(std::span(cipher).first(n)); }) == ErrorCode::Truncated);
    }
  }
}

TEST_CASE("header and cell validation") {
  auto key = write_key(example_chain());
  key[0] = 'X';
  CHECK(error_of([&] { read_key(key); }) == ErrorCode::BadMagic);
  auto longer = write_key(example_chain());
  longer.push_back(0);
  CHECK(error_of([&] { read_key(longer); }) == ErrorCode::TrailingBytes);

  CipherFile file;
  file.blocks.push_back(encrypt_block(Block30(kExampleBlock), example_chain()));
  const auto good = write_cipher(file);

  auto bad_magic = good;
  bad_magic[3] = '2';
  CHECK(error_of([&] { read_cipher(bad_magic); }) == ErrorCode::BadMagic);

  auto bad_version = good;
  bad_version[4] = 2;
  CHECK(error_of([&] { read_cipher(bad_version); }) == ErrorCode::BadVersion);

  auto bad_tag = good;
  bad_tag[13] = 9;
  CHECK(error_of([&] { read_cipher(bad_tag); }) == ErrorCode::MalformedCell);

  auto bad_x = good;
  bad_x[14] = 4;
  CHECK(error_of([&] { read_cipher(bad_x); }) == ErrorCode::MalformedCell);

  auto bad_tail = good;
  bad_tail[10] = 31;
  CHECK(error_of([&] { read_cipher(bad_tail); }) == ErrorCode::MalformedCell);

  auto zero_blocks = good;
  zero_blocks[9] = 0;
  CHECK(error_of([&] { read_cipher(zero_blocks); }) == ErrorCode::InventoryMismatch);

  auto huge_count = good;
  huge_count[6] = 0xFF;
  CHECK(error_of([&] { read_cipher(huge_count); }) == ErrorCode::Truncated);

  // First cell is a 3-byte ASM string; replacing it by an empty cell keeps
  // the stream parseable but breaks the inventory.
  std::vector<std::uint8_t> missing_asm(good.begin(), good.begin() + 13);
  missing_asm.push_back(0);
  missing_asm.insert(missing_asm.end(), good.begin() + 16, good.end());
  CHECK(error_of([&] { read_cipher(missing_asm); }) == ErrorCode::InventoryMismatch);

  auto trailing = good;
  trailing.push_back(0);
  CHECK(error_of([&] { read_cipher(trailing); }) == ErrorCode::TrailingBytes);
}

TEST_CASE("random byte strings never crash the parsers") {
  std::mt19937_64 rng(33);
  CipherFile file;
  file.blocks.push_back(encrypt_block(Block30(kExampleBlock), example_chain()));
  const auto good = write_cipher(file);
  for (int i = 0; i < 20000; ++i) {
    auto mutated = good;
    const int flips = 1 + static_cast<int>(rng() % 4);
    for (int f = 0; f < flips; ++f) mutated[rng() % mutated.size()] = static_cast<std::uint8_t>(rng());
    try {
      const CipherFile parsed = read_cipher(mutated);
      CHECK(parsed.blocks.size() == 1);
    } catch (const Error&) {
    }
    std::vector<std::uint8_t> noise(rng() % 64);
    for (auto& b : noise) b = static_cast<std::uint8_t>(rng());
    try {
      read_key(noise);
    } catch (const Error&) {
    }
    try {
      read_cipher(noise);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("writer refuses unrepresentable values") {
  CipherFile empty;
  CHECK(error_of([&] { write_cipher(empty); }) == ErrorCode::ValueOutOfRange);
  CipherFile mismatch;
  mismatch.blocks.push_back(encrypt_block(Block30(kExampleBlock), example_chain()));
  mismatch.sticky_rounds = 1;
  CHECK(error_of([&] { write_cipher(mismatch); }) == ErrorCode::ValueOutOfRange);
}
