#ifndef MIDICOTH_TESTS_SUPPORT_HPP
#define MIDICOTH_TESTS_SUPPORT_HPP

#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "midicoth/distribution.hpp"

namespace mdt {

inline std::string corpus_path(const std::string& rel) {
    const char* env = std::getenv("MIDICOTH_CORPUS");
    std::string dir = env ? env : MIDICOTH_CORPUS_DIR;
    return dir + "/" + rel;
}

inline std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("missing test corpus file: " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(f),
                                std::istreambuf_iterator<char>());
}

inline std::vector<uint8_t> random_bytes(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = static_cast<uint8_t>(rng());
    return v;
}

// Random point on the simplex (floored), for quantization/tree properties.
inline midicoth::Distribution random_distribution(std::mt19937_64& rng) {
    std::exponential_distribution<double> ex(1.0);
    midicoth::Distribution d;
    for (int i = 0; i < 256; ++i) d.p[i] = ex(rng) + 1e-9;
    midicoth::normalize(d);
    return d;
}

} // namespace mdt

#endif
