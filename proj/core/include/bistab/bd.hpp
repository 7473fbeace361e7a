#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bistab/reaction.hpp"
#include "bistab/splitting.hpp"

namespace bistab {

// Combined per-state birth-death rates on {0..N}: up[i] moves i -> i+1
// (defined for i = 0..N-1), down[i] moves i -> i-1 (defined for i = 1..N).
// Both vectors have length N+1 with the unused entry set to 0.
struct BirthDeathModel {
    std::int64_t N = 0;
    std::vector<double> up;
    std::vector<double> down;
};

// Assemble rates from a unit-increment network plus a unit-step kernel fired
// at rate spec.rate(x, N). Boundary states get no splitting contribution
// (the kernel is absorbing there). Pass a default SplitRateSpec with
// gamma identically 0 via build_reactions_only for the no-splitting case.
BirthDeathModel build_birth_death(const ReactionNetwork& net, const SplittingKernel& kernel,
                                  const SplitRateSpec& rate, std::int64_t N);
BirthDeathModel build_reactions_only(const ReactionNetwork& net, std::int64_t N);

// Probability that the walk started at j reaches N before 0, for every j.
// Computed from ratio products as exponentials of compensated log sums.
std::vector<double> hitting_prob_all(const BirthDeathModel& model);
double hitting_prob(const BirthDeathModel& model, std::int64_t j);

// Expected time to absorption in {0, N} from every j (e_0 = e_N = 0).
std::vector<double> expected_hitting_time_all(const BirthDeathModel& model);
double expected_hitting_time(const BirthDeathModel& model, std::int64_t j);

// Independent dense tridiagonal solve of the same two systems; N <= 2000.
struct BdSolution {
    std::vector<double> pi;  // pi[j] = P_j(hit N before 0)
    std::vector<double> e;   // e[j]  = expected absorption time
};
BdSolution oracle_solve(const BirthDeathModel& model);

// Per-state bias eps(i) = down(i)/up(i) - 1 over interior states.
struct BiasProfile {
    std::vector<double> eps;  // length N+1, boundary entries 0
    double sum_abs = 0.0;
};
BiasProfile bias_profile(const BirthDeathModel& model);

// Fast-regime sufficient-condition statistics for a factorized splitting rate
// gamma(x, N) = g(N) * p(x/N), evaluated exactly at each N in the ladder.
struct FastConditionRow {
    std::int64_t N = 0;
    double sum1 = 0.0;         // (N / g(N)) * sum 1/p_i
    double sum2 = 0.0;         // (1 / g(N)) * sum i/p_i
    double sum3 = 0.0;         // (1 / g(N)) * sum (N-i)/p_i
    double sum_abs_eps = 0.0;  // sum |down/up - 1| over interior states
    double N_pi_1N = 0.0;      // N * P_1(hit N first)
    double N_e_1 = 0.0;        // N * expected absorption time from 1
};

struct FastConditionReport {
    std::vector<FastConditionRow> rows;
    double r01_pred = 0.0;  // limiting per-capita boundary escape rate from 0
    double r10_pred = 0.0;  // and from N
    bool structure_ok = false;
    std::vector<std::string> structure_issues;
    bool sums_decreasing = false;  // every statistic shrinks along the ladder
};

FastConditionReport check_fast_conditions(const ReactionNetwork& net,
                                          const SplittingKernel& kernel,
                                          const SplitRateSpec& rate,
                                          const std::vector<std::int64_t>& N_list);

}  // namespace bistab
