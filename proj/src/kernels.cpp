#include "parley/kernels.hpp"

#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parley::kernels {

using embedding::similarity;

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double mean_pairwise_dissimilarity(const std::vector<Vec>& vs, Exec exec, ClampMode mode) {
    const std::size_t n = vs.size();
    if (n < 2) return 0.0;
    std::vector<double> partial(n, 0.0);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
            double s = 0.0;
            for (std::size_t j = std::size_t(i) + 1; j < n; ++j) {
                s += 1.0 - similarity(vs[std::size_t(i)], vs[j], mode);
            }
            partial[std::size_t(i)] = s;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                s += 1.0 - similarity(vs[i], vs[j], mode);
            }
            partial[i] = s;
        }
    }
    double total = 0.0;
    for (const double p : partial) total += p;  // fixed combine order
    const double pairs = double(n) * double(n - 1) / 2.0;
    return total / pairs;
}

std::vector<double> max_similarity_per_query(const std::vector<Vec>& queries,
                                             const std::vector<Vec>& keys, Exec exec,
                                             ClampMode mode) {
    std::vector<double> out(queries.size(), -1.0);
    if (keys.empty()) return out;
    auto best_for = [&](std::size_t qi) {
        double best = -1.0;
        for (const auto& k : keys) {
            const double s = similarity(queries[qi], k, mode);
            if (s > best) best = s;
        }
        return best;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(queries.size()); ++i) {
            out[std::size_t(i)] = best_for(std::size_t(i));
        }
    } else {
        for (std::size_t i = 0; i < queries.size(); ++i) out[i] = best_for(i);
    }
    return out;
}

MstResult minimum_spanning_tree(const std::vector<Vec>& vs, Exec exec, ClampMode mode) {
    MstResult res;
    const std::size_t n = vs.size();
    if (n < 2) return res;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n, kInf);
    std::vector<std::size_t> parent(n, 0);
    std::vector<char> in_tree(n, 0);
    best[0] = 0.0;

    for (std::size_t round = 0; round < n; ++round) {
        // pick the cheapest unattached vertex, smallest index on ties
        std::size_t u = n;
        double ub = kInf;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && best[v] < ub) {
                ub = best[v];
                u = v;
            }
        }
        in_tree[u] = 1;
        if (u != 0) {
            res.total_weight += best[u];
            const std::size_t a = std::min(u, parent[u]);
            const std::size_t b = std::max(u, parent[u]);
            res.edges.emplace_back(a, b);
        }
        // relax distances to the new tree vertex; element-wise independent
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t v = 0; v < std::ptrdiff_t(n); ++v) {
                const auto vi = std::size_t(v);
                if (in_tree[vi]) continue;
                const double d = 1.0 - similarity(vs[u], vs[vi], mode);
                if (d < best[vi]) {
                    best[vi] = d;
                    parent[vi] = u;
                }
            }
        } else {
            for (std::size_t v = 0; v < n; ++v) {
                if (in_tree[v]) continue;
                const double d = 1.0 - similarity(vs[u], vs[v], mode);
                if (d < best[v]) {
                    best[v] = d;
                    parent[v] = u;
                }
            }
        }
    }
    return res;
}

double mst_mean_edge(const std::vector<Vec>& vs, Exec exec, ClampMode mode) {
    if (vs.size() < 2) return 0.0;
    const MstResult r = minimum_spanning_tree(vs, exec, mode);
    return r.total_weight / double(vs.size() - 1);
}

}  // namespace parley::kernels
