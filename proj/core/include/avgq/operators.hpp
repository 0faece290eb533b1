#pragma once

#include "avgq/mdp.hpp"

namespace avgq {

/// Undiscounted Bellman operator:
/// H(Q)(s,a) = R(s,a) + sum_{s'} p(s'|s,a) * max_{a'} Q(s',a').
QTable bellman(const TabularMdp& mdp, const QTable& q);

/// Discounted Bellman operator with factor gamma in (0,1):
/// H_g(Q)(s,a) = R(s,a) + gamma * sum_{s'} p(s'|s,a) * max_{a'} Q(s',a').
QTable bellman_discounted(const TabularMdp& mdp, const QTable& q, double gamma);

/// Largest total-variation distance between any two transition rows:
/// beta = max over pairs-of-pairs of (1/2) sum_{s'} |p(s'|s,a) - p(s'|s',a')|.
/// If beta < 1, H contracts in the span seminorm with factor beta.
double tv_contraction_factor(const TabularMdp& mdp);

/// Asynchronous Bellman operator, the expected one-step update under
/// visitation weights D: entrywise
/// Hbar(Q)(s,a) = (1 - D(s,a)) * Q(s,a) + D(s,a) * H(Q)(s,a).
/// Requires strictly positive D entries.
QTable async_bellman(const TabularMdp& mdp, const QTable& q, const FrequencyMatrix& d);

/// Discounted counterpart of async_bellman.
QTable async_bellman_discounted(const TabularMdp& mdp, const QTable& q, const FrequencyMatrix& d,
                                double gamma);

/// Sampled update operator: returns Q' equal to Q except possibly at
/// (y.s0, y.a0), where
/// Q'(s0,a0) = Q(s0,a0) + (R(s0,a0) + max_{a'} Q(y.s1,a') - Q(s0,a0)) / d(s0,a0).
/// Summed over triples weighted by their stationary law, this is an unbiased
/// estimator of bellman(mdp, q) when d is the true visitation frequency.
QTable sampled_update(const TabularMdp& mdp, const QTable& q, const FrequencyMatrix& d,
                      TransitionTriple y);

/// Specialization with unit weights (no frequency correction): the raw
/// asynchronous one-step update.
QTable sampled_update(const TabularMdp& mdp, const QTable& q, TransitionTriple y);

}  // namespace avgq
