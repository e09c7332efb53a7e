#pragma once

// Per-replicate work shared by the OpenMP kernels and the serial reference.

#include <vector>

#include "ue/resampling.hpp"

namespace ue::detail {

struct ReplicateWorkspace {
    std::vector<IndexPair> picks;
    std::vector<std::size_t> perm;
    std::vector<double> row_mult;
    std::vector<double> col_mult;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

struct ReplicateValue {
    double c = 0.0;
    double u = 0.0; ///< raw U on the resample (no scheme centering)
};

void fill_trial_shuffle(std::size_t n, Rng& rng, std::vector<IndexPair>& out);
void fill_full_bootstrap(std::size_t n, Rng& rng, std::vector<IndexPair>& out);
void fill_permutation(std::size_t n, Rng& rng, std::vector<std::size_t>& out);

double cross_sum(const CoincidenceMatrix& m, std::span<const IndexPair> picks, ReplicateWorkspace& ws);

ReplicateValue one_replicate(const CoincidenceMatrix& m, ResampleScheme scheme, Rng& rng, ReplicateWorkspace& ws,
                             bool need_u);

void check_replicate_args(const CoincidenceMatrix& m, std::size_t B);

} // namespace ue::detail
