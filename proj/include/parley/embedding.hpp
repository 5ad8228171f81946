#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parley::embedding {

using Vec = std::vector<float>;

enum class ClampMode { zero, none };

// Cosine similarity. Default mode clamps below at zero so that every
// derived distance 1 - sim stays in [0,1]. Throws on dimension mismatch
// or a zero-norm operand.
double similarity(const Vec& a, const Vec& b, ClampMode mode = ClampMode::zero);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double l2_distance(const Vec& a, const Vec& b);

// In-place unit normalization; returns false if the norm is below eps.
bool normalize(Vec& v, double eps = 1e-12);

Vec mean_vector(std::span<const Vec> vs);

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<Vec> embed(std::span<const std::string> texts) = 0;
    virtual std::uint32_t dim() const = 0;
    virtual std::string model_id() const = 0;

    Vec embed_one(const std::string& text);
};

// Seeded feature-hashed bag of words with sublinear term frequency,
// unit-normalized. Deterministic for a fixed (dim, seed).
class HashEmbedder final : public Embedder {
public:
    HashEmbedder(std::uint32_t dim, std::uint64_t seed);

    std::vector<Vec> embed(std::span<const std::string> texts) override;
    std::uint32_t dim() const override { return dim_; }
    std::string model_id() const override;

    Vec embed_text(std::string_view text) const;

private:
    std::uint32_t dim_;
    std::uint64_t seed_;
};

// Memoizing wrapper. Always caches in memory; optionally persists to a
// binary record file (sha256 key, u32 LE dim, f32 LE values). The cache is
// transparent: hits and misses return bit-identical vectors.
class CachedEmbedder final : public Embedder {
public:
    CachedEmbedder(std::shared_ptr<Embedder> inner, std::string cache_path = {});
    ~CachedEmbedder() override;

    std::vector<Vec> embed(std::span<const std::string> texts) override;
    std::uint32_t dim() const override;
    std::string model_id() const override;

    std::size_t memory_entries() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace parley::embedding
