#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "parley/embedding.hpp"

namespace parley::kernels {

using embedding::ClampMode;
using embedding::Vec;

// All parallel kernels are bit-deterministic: partial results are produced
// per index and combined in a fixed order, so thread count never changes a
// value. Each kernel keeps a serial reference used by the test suite and
// the benchmark.
enum class Exec { serial, parallel };

void set_threads(int n);  // 0 = runtime default
int max_threads();

// Mean of (1 - sim) over all distinct unordered pairs; 0 when n < 2.
double mean_pairwise_dissimilarity(const std::vector<Vec>& vs, Exec exec = Exec::parallel,
                                   ClampMode mode = ClampMode::zero);

// For each query, the maximum similarity against any key; -1 entries when
// keys are empty.
std::vector<double> max_similarity_per_query(const std::vector<Vec>& queries,
                                             const std::vector<Vec>& keys,
                                             Exec exec = Exec::parallel,
                                             ClampMode mode = ClampMode::zero);

// Minimum spanning tree under d = 1 - sim, Prim's algorithm with
// index-order tie-breaking. edges are (smaller index, larger index).
struct MstResult {
    double total_weight = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};
MstResult minimum_spanning_tree(const std::vector<Vec>& vs, Exec exec = Exec::parallel,
                                ClampMode mode = ClampMode::zero);

// total_weight / (n - 1); 0 when n < 2.
double mst_mean_edge(const std::vector<Vec>& vs, Exec exec = Exec::parallel,
                     ClampMode mode = ClampMode::zero);

}  // namespace parley::kernels
