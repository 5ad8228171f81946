#include "parley/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "parley/errors.hpp"
#include "parley/sha256.hpp"
#include "parley/text.hpp"

namespace parley::embedding {

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("embedding dimension mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += double(a[i]) * double(b[i]);
    return s;
}

double norm(const Vec& a) {
    double s = 0.0;
    for (const float x : a) s += double(x) * double(x);
    return std::sqrt(s);
}

double l2_distance(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("embedding dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = double(a[i]) - double(b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

double similarity(const Vec& a, const Vec& b, ClampMode mode) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na <= 0.0 || nb <= 0.0) throw std::invalid_argument("similarity of zero-norm vector");
    double c = dot(a, b) / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    if (mode == ClampMode::zero && c < 0.0) c = 0.0;
    return c;
}

bool normalize(Vec& v, double eps) {
    const double n = norm(v);
    if (n < eps) return false;
    for (auto& x : v) x = static_cast<float>(double(x) / n);
    return true;
}

Vec mean_vector(std::span<const Vec> vs) {
    if (vs.empty()) throw std::invalid_argument("mean of zero vectors");
    Vec out(vs.front().size(), 0.0f);
    std::vector<double> acc(out.size(), 0.0);
    for (const auto& v : vs) {
        if (v.size() != out.size()) throw std::invalid_argument("embedding dimension mismatch");
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<float>(acc[i] / double(vs.size()));
    }
    return out;
}

Vec Embedder::embed_one(const std::string& text) {
    const std::string arr[1] = {text};
    return embed(std::span<const std::string>(arr, 1)).front();
}

// ---------------------------------------------------------------------------
// HashEmbedder

namespace {

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    // final avalanche (splitmix64 tail)
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

}  // namespace

HashEmbedder::HashEmbedder(std::uint32_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim_ == 0) throw std::invalid_argument("embedding dim must be positive");
}

std::string HashEmbedder::model_id() const {
    return "hashbow-" + std::to_string(dim_) + "-seed" + std::to_string(seed_);
}

Vec HashEmbedder::embed_text(std::string_view text) const {
    std::vector<std::string> toks = text::tokenize_folded(text);
    std::map<std::string, std::size_t> tf;
    if (toks.empty()) {
        // punctuation-only utterances still get a deterministic nonzero
        // vector: hash the trimmed raw bytes as one unit
        tf[std::string(text::trim(text))] = 1;
    } else {
        for (auto& t : toks) ++tf[t];
    }
    Vec v(dim_, 0.0f);
    for (const auto& [tok, count] : tf) {
        const std::uint64_t h = fnv1a64(tok, seed_);
        const std::uint32_t idx = static_cast<std::uint32_t>(h % dim_);
        const float sign = (h >> 63) ? -1.0f : 1.0f;
        const float w = static_cast<float>(1.0 + std::log(double(count)));
        v[idx] += sign * w;
    }
    if (!normalize(v)) {
        // all buckets cancelled (possible only via collisions); fall back to
        // a single deterministic spike
        std::fill(v.begin(), v.end(), 0.0f);
        v[fnv1a64(text, seed_) % dim_] = 1.0f;
    }
    return v;
}

std::vector<Vec> HashEmbedder::embed(std::span<const std::string> texts) {
    std::vector<Vec> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_text(t));
    return out;
}

// ---------------------------------------------------------------------------
// CachedEmbedder

struct CachedEmbedder::Impl {
    std::shared_ptr<Embedder> inner;
    std::string path;
    mutable std::shared_mutex mu;
    std::unordered_map<std::string, Vec> mem;  // key: sha256 hex of (model, text)
    std::ofstream appender;

    std::string key(const std::string& text) const {
        return sha256_hex(inner->model_id() + "\n" + text);
    }
};

CachedEmbedder::CachedEmbedder(std::shared_ptr<Embedder> inner, std::string cache_path)
    : impl_(std::make_unique<Impl>()) {
    impl_->inner = std::move(inner);
    impl_->path = std::move(cache_path);
    if (impl_->path.empty()) return;

    // load existing records: [32B hash][u32 LE dim][dim f32 LE]
    std::ifstream in(impl_->path, std::ios::binary);
    while (in) {
        char hash[32];
        if (!in.read(hash, 32)) break;
        std::uint32_t dim = 0;
        unsigned char db[4];
        if (!in.read(reinterpret_cast<char*>(db), 4)) break;
        dim = std::uint32_t(db[0]) | (std::uint32_t(db[1]) << 8) | (std::uint32_t(db[2]) << 16) |
              (std::uint32_t(db[3]) << 24);
        if (dim != impl_->inner->dim()) {
            throw ProviderError("embedding cache dimension mismatch: file has " +
                                std::to_string(dim) + ", provider has " +
                                std::to_string(impl_->inner->dim()));
        }
        Vec v(dim);
        if (!in.read(reinterpret_cast<char*>(v.data()), std::streamsize(dim) * 4)) break;
        static const char* kHex = "0123456789abcdef";
        std::string hex;
        hex.reserve(64);
        for (int i = 0; i < 32; ++i) {
            const auto b = static_cast<unsigned char>(hash[i]);
            hex.push_back(kHex[b >> 4]);
            hex.push_back(kHex[b & 0xF]);
        }
        impl_->mem.emplace(std::move(hex), std::move(v));
    }
    in.close();
    impl_->appender.open(impl_->path, std::ios::binary | std::ios::app);
}

CachedEmbedder::~CachedEmbedder() = default;

std::uint32_t CachedEmbedder::dim() const { return impl_->inner->dim(); }
std::string CachedEmbedder::model_id() const { return impl_->inner->model_id(); }
std::size_t CachedEmbedder::memory_entries() const {
    std::shared_lock lock(impl_->mu);
    return impl_->mem.size();
}

std::vector<Vec> CachedEmbedder::embed(std::span<const std::string> texts) {
    std::vector<Vec> out(texts.size());
    std::vector<std::size_t> misses;
    std::vector<std::string> keys(texts.size());
    {
        std::shared_lock lock(impl_->mu);
        for (std::size_t i = 0; i < texts.size(); ++i) {
            keys[i] = impl_->key(texts[i]);
            auto it = impl_->mem.find(keys[i]);
            if (it != impl_->mem.end()) {
                out[i] = it->second;
            } else {
                misses.push_back(i);
            }
        }
    }
    if (misses.empty()) return out;

    std::vector<std::string> miss_texts;
    miss_texts.reserve(misses.size());
    for (const auto i : misses) miss_texts.push_back(texts[i]);
    std::vector<Vec> fresh = impl_->inner->embed(miss_texts);

    std::unique_lock lock(impl_->mu);
    for (std::size_t j = 0; j < misses.size(); ++j) {
        const std::size_t i = misses[j];
        auto [it, inserted] = impl_->mem.emplace(keys[i], fresh[j]);
        out[i] = it->second;
        if (inserted && impl_->appender.is_open()) {
            // hex key back to raw bytes for the record header
            char hash[32];
            for (int b = 0; b < 32; ++b) {
                auto nib = [](char c) -> int {
                    return c <= '9' ? c - '0' : c - 'a' + 10;
                };
                hash[b] = static_cast<char>((nib(keys[i][2 * b]) << 4) | nib(keys[i][2 * b + 1]));
            }
            const std::uint32_t d = dim();
            const unsigned char db[4] = {
                static_cast<unsigned char>(d & 0xFF),
                static_cast<unsigned char>((d >> 8) & 0xFF),
                static_cast<unsigned char>((d >> 16) & 0xFF),
                static_cast<unsigned char>((d >> 24) & 0xFF),
            };
            impl_->appender.write(hash, 32);
            impl_->appender.write(reinterpret_cast<const char*>(db), 4);
            impl_->appender.write(reinterpret_cast<const char*>(it->second.data()),
                                  std::streamsize(d) * 4);
            impl_->appender.flush();
        }
    }
    return out;
}

}  // namespace parley::embedding
