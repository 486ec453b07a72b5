#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavsim/crypto.hpp"

using namespace uavsim;

TEST_CASE("key lengths map to the right suites") {
  CHECK(suite_from_key_length(64).algorithm == CipherAlgo::DES);
  CHECK(suite_from_key_length(64).block_size == 64);
  CHECK(suite_from_key_length(64).rounds == 16);
  for (int n : {128, 192, 256}) {
    CipherSuite s = suite_from_key_length(n);
    CHECK(s.algorithm == CipherAlgo::AES);
    CHECK(s.block_size == 128);
  }
  CHECK(suite_from_key_length(128).rounds == 10);
  CHECK(suite_from_key_length(192).rounds == 12);
  CHECK(suite_from_key_length(256).rounds == 14);
  for (int n : {1024, 2048, 3072, 4096}) {
    CipherSuite s = suite_from_key_length(n);
    CHECK(s.algorithm == CipherAlgo::RSA);
    CHECK(s.block_size == n);
  }
  CHECK_THROWS_AS(suite_from_key_length(512), InvalidKeyLengthError);
  CHECK_FALSE(is_valid_key_length(512));
  CHECK(is_valid_key_length(3072));
}

TEST_CASE("golden per-block complexities at unit cycle costs") {
  CycleCosts unit;
  CHECK(complexity(suite_from_key_length(64), CryptoDirection::Encrypt, unit) ==
        doctest::Approx(336.0).epsilon(1e-12));
  CHECK(complexity(suite_from_key_length(64), CryptoDirection::Decrypt, unit) ==
        doctest::Approx(336.0).epsilon(1e-12));
  CHECK(complexity(suite_from_key_length(128), CryptoDirection::Encrypt, unit) ==
        doctest::Approx(6104.0).epsilon(1e-12));
  CHECK(complexity(suite_from_key_length(128), CryptoDirection::Decrypt, unit) ==
        doctest::Approx(12368.0).epsilon(1e-12));
  CHECK(complexity(suite_from_key_length(192), CryptoDirection::Encrypt, unit) ==
        doctest::Approx(7448.0).epsilon(1e-12));
  CHECK(complexity(suite_from_key_length(192), CryptoDirection::Decrypt, unit) ==
        doctest::Approx(15104.0).epsilon(1e-12));
  CHECK(complexity(suite_from_key_length(256), CryptoDirection::Encrypt, unit) ==
        doctest::Approx(8792.0).epsilon(1e-12));
  CHECK(complexity(suite_from_key_length(256), CryptoDirection::Decrypt, unit) ==
        doctest::Approx(17840.0).epsilon(1e-12));
  for (int n : {1024, 2048, 3072, 4096}) {
    double c = static_cast<double>(n) * n;
    CHECK(complexity(suite_from_key_length(n), CryptoDirection::Encrypt, unit) ==
          doctest::Approx(c).epsilon(1e-12));
    CHECK(complexity(suite_from_key_length(n), CryptoDirection::Decrypt, unit) ==
          doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("cycle costs scale the bitwise ciphers but not RSA") {
  CycleCosts doubled{2, 2, 2, 2};
  CHECK(complexity(suite_from_key_length(64), CryptoDirection::Encrypt, doubled) ==
        doctest::Approx(672.0));
  CHECK(complexity(suite_from_key_length(128), CryptoDirection::Encrypt, doubled) ==
        doctest::Approx(12208.0));
  CHECK(complexity(suite_from_key_length(1024), CryptoDirection::Encrypt, doubled) ==
        doctest::Approx(1024.0 * 1024.0));
}

TEST_CASE("block count is a ceiling") {
  CHECK(block_count(suite_from_key_length(64), 131072.0) == doctest::Approx(2048.0));
  CHECK(block_count(suite_from_key_length(64), 131073.0) == doctest::Approx(2049.0));
  CHECK(block_count(suite_from_key_length(128), 1.0) == doctest::Approx(1.0));
  CHECK(block_count(suite_from_key_length(1024), 1024.0) == doctest::Approx(1.0));
}

TEST_CASE("latency = complexity * blocks / clock") {
  CycleCosts unit;
  CipherSuite des = suite_from_key_length(64);
  CHECK(encryption_latency(des, 131072.0, 1.8e9, unit) ==
        doctest::Approx(336.0 * 2048.0 / 1.8e9).epsilon(1e-12));
  CipherSuite rsa = suite_from_key_length(1024);
  CHECK(decryption_latency(rsa, 1024.0, 3.5e9, unit) ==
        doctest::Approx(1024.0 * 1024.0 / 3.5e9).epsilon(1e-12));
  // AES decryption is strictly costlier than encryption
  CipherSuite aes = suite_from_key_length(256);
  CHECK(decryption_latency(aes, 1e6, 2e9, unit) > encryption_latency(aes, 1e6, 2e9, unit));
}

TEST_CASE("security level spans 6..12") {
  CHECK(security_level(64) == doctest::Approx(6.0));
  CHECK(security_level(128) == doctest::Approx(7.0));
  CHECK(security_level(256) == doctest::Approx(8.0));
  CHECK(security_level(1024) == doctest::Approx(10.0));
  CHECK(security_level(4096) == doctest::Approx(12.0));
}
