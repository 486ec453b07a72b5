#pragma once

#include <array>
#include <stdexcept>

#include "uavsim/config.hpp"

namespace uavsim {

struct InvalidKeyLengthError : std::runtime_error {
  explicit InvalidKeyLengthError(int key_length)
      : std::runtime_error("invalid key length: " + std::to_string(key_length)) {}
};

enum class CipherAlgo { DES, AES, RSA };
enum class CryptoDirection { Encrypt, Decrypt };

/// Cycle cost of one primitive AND/OR/shift/XOR operation.
struct CycleCosts {
  double n_and = 1.0;
  double n_or = 1.0;
  double n_shift = 1.0;
  double n_xor = 1.0;

  static CycleCosts from_config(const ScenarioConfig& c) {
    return {c.cycle_and, c.cycle_or, c.cycle_shift, c.cycle_xor};
  }
};

struct CipherSuite {
  CipherAlgo algorithm;
  int key_length;  // bits
  int block_size;  // bits; equals key_length for RSA
  int rounds;
};

/// The eight supported key lengths, ascending. Index order is shared with the
/// agent's key-selection head.
inline constexpr std::array<int, 8> kKeyLengths = {64,   128,  192,  256,
                                                  1024, 2048, 3072, 4096};

/// Maps a key length to its unique cipher suite; the algorithm is implied
/// because the per-algorithm key sets do not overlap.
CipherSuite suite_from_key_length(int key_length);

bool is_valid_key_length(int key_length);

/// Per-block computational complexity in cycles. DES and RSA are symmetric in
/// direction; AES decryption is costlier than encryption.
double complexity(const CipherSuite& suite, CryptoDirection direction,
                  const CycleCosts& costs = {});

/// Blocks are independent (ECB); cost is per-block complexity times the
/// ceiling block count.
double block_count(const CipherSuite& suite, double data_bits);

double encryption_latency(const CipherSuite& suite, double data_bits, double clock_hz,
                          const CycleCosts& costs = {});

double decryption_latency(const CipherSuite& suite, double data_bits, double clock_hz,
                          const CycleCosts& costs = {});

/// Security level S = log2(N); spans [6, 12] over the supported keys.
double security_level(int key_length);

}  // namespace uavsim
