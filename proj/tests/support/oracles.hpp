#pragma once

// Slow, independent re-implementations used as ground truth.  Everything here
// favors the most literal formulation available (exhaustive enumeration,
// per-entry arithmetic) over the optimizations the library uses, so agreement
// is meaningful.

#include <vector>

#include "roughjump/path.hpp"
#include "roughjump/smoothfn.hpp"
#include "roughjump/tensor.hpp"

namespace roughjump::oracle {

// Average of t over all permutations of its index tuple, entry by entry via
// std::next_permutation.
DenseTensor symmetrize(const DenseTensor& t);

// v^{otimes k} entry by entry.
DenseTensor rank1(const Vector& v, int k);

// <f, t> as a flat loop over every multi-index.
double pairing(const DenseTensor& f, const DenseTensor& t);

// Compensated Riemann sum recomputed from first principles: dense tensor
// powers of the plain increment paired against explicitly built derivative
// tensors, summed left to right.
double compensated_sum_naive(const SmoothFunction& F, const RegulatedPath& X,
                             const std::vector<int>& partition, int n);

// sup over sample chains of sum ||dS||^p via top-down recursion on the
// expanded one-sided sample sequence (suffix memo), independent of the
// library's forward DP.
double p_variation_pow_suffix(const RegulatedPath& X, double p);

// Exhaustive enumeration over all 2^m sample subsets; m is capped, use only
// on tiny paths.
double p_variation_pow_exhaustive(const RegulatedPath& X, double p);

// Oscillation as a direct double loop over interior one-sided samples.
double oscillation_naive(const RegulatedPath& X, int i, int j);

// Closed-form integral of a pure-jump staircase: the sum over jumps of the
// order-n Taylor head of F at the pre-jump value.
double staircase_integral(const SmoothFunction& F, const RegulatedPath& X,
                          int n);

// Two-sample Kolmogorov-Smirnov: returns the asymptotic p-value of the
// two-sided statistic.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

}  // namespace roughjump::oracle
