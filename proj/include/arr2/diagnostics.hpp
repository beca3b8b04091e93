#pragma once

#include <span>
#include <vector>

namespace arr2::inference {

/// One vector of draws per chain, all chains of equal length.
using Chains = std::vector<std::vector<double>>;

/// Classic potential scale reduction on the chains as given (no splitting).
double rhat_basic(const Chains& chains);

/**
 * @brief Rank-normalised split R-hat: max of the bulk and folded versions.
 *
 * NaN when any split chain is constant.
 */
double split_rhat(const Chains& chains);

/// Effective sample size with Geyer's initial monotone sequence, on the chains as given.
double ess_basic(const Chains& chains);
/// ESS of the rank-normalised split chains.
double ess_bulk(const Chains& chains);
/// Minimum ESS of the 5% and 95% quantile indicators.
double ess_tail(const Chains& chains);

/// Each chain split into halves (middle draw dropped for odd lengths).
Chains split_chains(const Chains& chains);
/// Pooled ranks (average ties) mapped through the normal quantile.
Chains rank_normalize(const Chains& chains);

/// Empirical quantile with linear interpolation (type 7).
double quantile(std::vector<double> v, double prob);

}  // namespace arr2::inference
