#pragma once

#include <cmath>
#include <cstdint>

namespace ddc {

// Counter-based generator: SplitMix64 finalizer over an affine counter,
// keyed by (seed, stream). Word i of a stream depends only on (seed, stream, i),
// so parallel and serial runs draw identical numbers.
constexpr std::uint64_t kSmGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream + kSmGamma));
}

inline std::uint64_t stream_word(std::uint64_t key, std::uint64_t i) {
    return mix64(key + (i + 1) * kSmGamma);
}

inline double u64_to_unit_double(std::uint64_t v) {
    // (0,1), 53 significant bits
    return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
}

// Writes normals [i0, i0+n) of the stream's canonical N(0,1) sequence.
// The sequence is buffer-size independent: pair j consumes word j and yields
// normals 2j (cosine leg) and 2j+1 (sine leg) by Box-Muller, the radius
// uniform from the top 53 bits and the angle from the low 32.
// i0 and n must be even.
inline void fill_normals(std::uint64_t key, std::uint64_t i0, int n, double* out, bool negate = false) {
    constexpr int kChunk = 128;
    double u1[kChunk], u2[kChunk], rad[kChunk];
    const std::uint64_t j0 = i0 / 2;
    int done = 0;
    const double flip = negate ? -1.0 : 1.0;
    while (done < n / 2) {
        const int m = std::min(kChunk, n / 2 - done);
        const std::uint64_t base = key + (j0 + done + 1) * kSmGamma;
        for (int i = 0; i < m; ++i) {
            std::uint64_t z = base + static_cast<std::uint64_t>(i) * kSmGamma;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            z ^= z >> 31;
            u1[i] = (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
            u2[i] = (static_cast<double>(z & 0xffffffffull) + 0.5) * 0x1.0p-32;
        }
        for (int i = 0; i < m; ++i) rad[i] = flip * std::sqrt(-2.0 * std::log(u1[i]));
        for (int i = 0; i < m; ++i) u2[i] *= 6.283185307179586476925286766559;
        for (int i = 0; i < m; ++i) out[2 * (done + i)] = rad[i] * std::cos(u2[i]);
        for (int i = 0; i < m; ++i) out[2 * (done + i) + 1] = rad[i] * std::sin(u2[i]);
        done += m;
    }
}

// Buffered scalar view over the canonical normal sequence of one stream.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : key_(stream_key(seed, stream)) {}

    inline double next() {
        if (pos_ == kBuf) {
            fill_normals(key_, idx_, kBuf, buf_);
            idx_ += kBuf;
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    void reset(std::uint64_t seed, std::uint64_t stream) {
        key_ = stream_key(seed, stream);
        idx_ = 0;
        pos_ = kBuf;
    }

  private:
    static constexpr int kBuf = 512;
    std::uint64_t key_;
    std::uint64_t idx_ = 0;
    int pos_ = kBuf;
    double buf_[kBuf];
};

// Buffered uniforms on (0,1); words of the same keyed counter stream.
class UniformStream {
  public:
    UniformStream(std::uint64_t seed, std::uint64_t stream) : key_(stream_key(seed, stream)) {}

    inline double next() {
        if (pos_ == kBuf) {
            for (int i = 0; i < kBuf; ++i) buf_[i] = u64_to_unit_double(stream_word(key_, idx_ + i));
            idx_ += kBuf;
            pos_ = 0;
        }
        return buf_[pos_++];
    }

  private:
    static constexpr int kBuf = 128;
    std::uint64_t key_;
    std::uint64_t idx_ = 0;
    int pos_ = kBuf;
    double buf_[kBuf];
};

}  // namespace ddc
