#include "parley/gmm.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace parley::gmm {

namespace {

constexpr double kVarFloor = 1e-6;
constexpr double kTol = 1e-6;
constexpr int kMaxIters = 200;
constexpr double kLog2Pi = 1.8378770664093453;

double sq_distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = double(a[i]) - double(b[i]);
        s += d * d;
    }
    return s;
}

// k-means++ seeding with a fixed RNG
std::vector<std::size_t> kmeanspp(const std::vector<Vec>& pts, std::size_t k,
                                  std::mt19937_64& rng) {
    std::vector<std::size_t> centers;
    std::uniform_int_distribution<std::size_t> first(0, pts.size() - 1);
    centers.push_back(first(rng));
    std::vector<double> d2(pts.size());
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto c : centers) best = std::min(best, sq_distance(pts[i], pts[c]));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total <= 0.0) {
            // all remaining points coincide with a center
            pick = first(rng);
        } else {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                target -= d2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pick);
    }
    return centers;
}

double log_gaussian_diag(const Vec& x, const Vec& mean, const std::vector<double>& var) {
    double lp = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = double(x[d]) - double(mean[d]);
        lp += -0.5 * (kLog2Pi + std::log(var[d]) + diff * diff / var[d]);
    }
    return lp;
}

}  // namespace

namespace {

FitResult fit_diagonal_once(const std::vector<Vec>& points, std::size_t k, std::uint64_t stream) {
    FitResult res;
    res.k = k;
    const std::size_t n = points.size();
    if (n == 0 || k == 0 || k > n) {
        res.failed = true;
        return res;
    }
    const std::size_t dim = points.front().size();

    // init: k-means++ centers, pooled variance, uniform weights
    std::mt19937_64 rng(stream);
    const auto center_ids = kmeanspp(points, k, rng);
    res.means.assign(k, Vec(dim, 0.0f));
    for (std::size_t c = 0; c < k; ++c) res.means[c] = points[center_ids[c]];

    std::vector<double> pooled(dim, 0.0);
    {
        Vec mean = embedding::mean_vector(points);
        for (const auto& p : points) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = double(p[d]) - double(mean[d]);
                pooled[d] += diff * diff;
            }
        }
        for (auto& v : pooled) v = std::max(v / double(n), kVarFloor);
    }
    res.variances.assign(k, pooled);
    res.weights.assign(k, 1.0 / double(k));

    std::vector<std::vector<double>> resp(n, std::vector<double>(k, 0.0));
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < kMaxIters; ++iter) {
        // E step
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                resp[i][c] = std::log(res.weights[c]) +
                             log_gaussian_diag(points[i], res.means[c], res.variances[c]);
                mx = std::max(mx, resp[i][c]);
            }
            double total = 0.0;
            for (std::size_t c = 0; c < k; ++c) total += std::exp(resp[i][c] - mx);
            const double log_norm = mx + std::log(total);
            ll += log_norm;
            for (std::size_t c = 0; c < k; ++c) resp[i][c] = std::exp(resp[i][c] - log_norm);
        }
        if (!std::isfinite(ll)) {
            res.failed = true;
            return res;
        }
        res.log_likelihood = ll;
        if (ll - prev_ll < kTol && iter > 0) {
            res.converged = true;
            break;
        }
        prev_ll = ll;

        // M step
        for (std::size_t c = 0; c < k; ++c) {
            double nc = 0.0;
            for (std::size_t i = 0; i < n; ++i) nc += resp[i][c];
            if (nc < 1e-12) {
                res.failed = true;  // collapsed component
                return res;
            }
            res.weights[c] = nc / double(n);
            std::vector<double> mean(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t d = 0; d < dim; ++d) mean[d] += resp[i][c] * double(points[i][d]);
            }
            for (auto& m : mean) m /= nc;
            std::vector<double> var(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = double(points[i][d]) - mean[d];
                    var[d] += resp[i][c] * diff * diff;
                }
            }
            for (std::size_t d = 0; d < dim; ++d) {
                res.variances[c][d] = std::max(var[d] / nc, kVarFloor);
                res.means[c][d] = static_cast<float>(mean[d]);
            }
        }
    }

    const double params = double(k) * 2.0 * double(dim) + double(k - 1);
    res.bic = -2.0 * res.log_likelihood + params * std::log(double(n));
    return res;
}

}  // namespace

FitResult fit_diagonal(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed) {
    // a few deterministic restarts guard against poor k-means++ draws; the
    // best final log-likelihood wins
    constexpr int kRestarts = 3;
    FitResult best;
    best.failed = true;
    for (int attempt = 0; attempt < kRestarts; ++attempt) {
        const std::uint64_t stream =
            seed ^ (0x9E3779B97F4A7C15ULL * (k + 1)) ^ (0xD1B54A32D192ED03ULL * (attempt + 1));
        FitResult r = fit_diagonal_once(points, k, stream);
        if (r.failed) continue;
        if (best.failed || r.log_likelihood > best.log_likelihood) best = std::move(r);
    }
    return best;
}

FitResult select_by_bic(const std::vector<Vec>& points, std::size_t k_max, std::uint64_t seed,
                        std::vector<double>* bic_trace) {
    if (bic_trace) bic_trace->clear();
    FitResult best;
    best.failed = true;
    for (std::size_t k = 1; k <= k_max; ++k) {
        FitResult r = fit_diagonal(points, k, seed);
        if (bic_trace) {
            bic_trace->push_back(r.failed ? std::numeric_limits<double>::quiet_NaN() : r.bic);
        }
        if (r.failed) continue;
        if (best.failed || r.bic < best.bic) best = std::move(r);  // strict: ties keep smaller k
    }
    return best;
}

}  // namespace parley::gmm
