#pragma once

#include <span>

#include "gamble/contest.hpp"
#include "gamble/law.hpp"

namespace gamble {

/// Payoff of one realized contest seen by one player. A win shared by k
/// players pays 1/k; a loss pays -K if the opponents' best lies strictly
/// inside (own_stop, own_max), -K2 if it equals own_max, 0 otherwise.
/// Throws DomainError on negative or non-finite inputs.
double realized_payoff(const ContestSpec& spec, double own_stop,
                       double own_max, std::span<const double> opponents);
double realized_payoff(const ContestSpec& spec, const PayoffOutcome& outcome);

/// x \int_x^\infty F(y)^{n-1} / y^2 dy, the expected value of F(M)^{n-1}
/// when P(M >= y) = x / y for y >= x.
double hitting_tail(const EquilibriumCdf& F, int n, double x);

/// \int\int [(1+K) F(x)^{n-1} - K F(y)^{n-1}] nu(dx, dy) by quadrature in
/// the quantile variable of the marginal of nu. For the whole-path mode the
/// maximum has P(M >= y) = x0 / y whatever the stopping rule.
double expected_payoff(const ContestSpec& spec, const JointLaw& own_law,
                       const EquilibriumCdf& opponent_cdf);

}  // namespace gamble
