#pragma once

#include <cstdint>
#include <vector>

#include "parley/embedding.hpp"

namespace parley::gmm {

using embedding::Vec;

struct FitResult {
    std::size_t k = 0;
    std::vector<Vec> means;
    std::vector<std::vector<double>> variances;  // per component, per dim
    std::vector<double> weights;
    double log_likelihood = 0.0;
    double bic = 0.0;
    bool converged = false;
    bool failed = false;
};

// Diagonal-covariance Gaussian mixture fitted by EM: k-means++ init from a
// fixed seed, variance floor 1e-6, convergence when the log-likelihood
// gain drops below 1e-6, at most 200 iterations. BIC uses
// k * 2 * dim + (k - 1) free parameters.
FitResult fit_diagonal(const std::vector<Vec>& points, std::size_t k, std::uint64_t seed);

// Fits k = 1..k_max and returns the BIC minimizer (ties to the smaller k).
FitResult select_by_bic(const std::vector<Vec>& points, std::size_t k_max, std::uint64_t seed,
                        std::vector<double>* bic_trace = nullptr);

}  // namespace parley::gmm
