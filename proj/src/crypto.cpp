#include "uavsim/crypto.hpp"

#include <cmath>

namespace uavsim {

bool is_valid_key_length(int key_length) {
  for (int n : kKeyLengths)
    if (n == key_length) return true;
  return false;
}

CipherSuite suite_from_key_length(int key_length) {
  switch (key_length) {
    case 64: return {CipherAlgo::DES, 64, 64, 16};
    case 128: return {CipherAlgo::AES, 128, 128, 10};
    case 192: return {CipherAlgo::AES, 192, 128, 12};
    case 256: return {CipherAlgo::AES, 256, 128, 14};
    case 1024:
    case 2048:
    case 3072:
    case 4096:
      return {CipherAlgo::RSA, key_length, key_length, 1};
    default: throw InvalidKeyLengthError(key_length);
  }
}

double complexity(const CipherSuite& suite, CryptoDirection direction, const CycleCosts& costs) {
  switch (suite.algorithm) {
    case CipherAlgo::DES:
      return 16.0 * costs.n_shift +
             suite.rounds * (10.0 * costs.n_shift + 10.0 * costs.n_xor);
    case CipherAlgo::AES: {
      double per_round = direction == CryptoDirection::Encrypt
                             ? 184.0 * costs.n_and + 136.0 * costs.n_or + 352.0 * costs.n_shift
                             : 644.0 * costs.n_and + 500.0 * costs.n_or + 224.0 * costs.n_shift;
      return 16.0 * costs.n_xor + (suite.rounds - 1) * per_round +
             (16.0 * costs.n_xor + 12.0 * costs.n_shift + 12.0 * costs.n_or);
    }
    case CipherAlgo::RSA:
      return static_cast<double>(suite.key_length) * suite.key_length;
  }
  return 0.0;  // unreachable
}

double block_count(const CipherSuite& suite, double data_bits) {
  return std::ceil(data_bits / suite.block_size);
}

double encryption_latency(const CipherSuite& suite, double data_bits, double clock_hz,
                          const CycleCosts& costs) {
  return complexity(suite, CryptoDirection::Encrypt, costs) * block_count(suite, data_bits) /
         clock_hz;
}

double decryption_latency(const CipherSuite& suite, double data_bits, double clock_hz,
                          const CycleCosts& costs) {
  return complexity(suite, CryptoDirection::Decrypt, costs) * block_count(suite, data_bits) /
         clock_hz;
}

double security_level(int key_length) {
  if (!is_valid_key_length(key_length)) throw InvalidKeyLengthError(key_length);
  return std::log2(static_cast<double>(key_length));
}

}  // namespace uavsim
