#pragma once

#include "cpd/model.hpp"

namespace cpd::oracle {

/// Reference implementations that re-evaluate the defining sums from scratch
/// for every (k, q[, l]) triple: no shared tables, no prefix recurrences, no
/// code shared with the fast kernels. O(n^3 m d) per profile; meant for
/// equivalence testing at small n only.

StatProfile profile(const Sample& s, Family family, const DirectionSet* dirs = nullptr);

/// Global replicate value obtained by evaluating the multiplier process
/// displays term by term and combining. `method` must be Hat or Check.
double replicate(const Sample& s, const Eigen::VectorXd& xi, StatFamily stat, Method method,
                 const DirectionSet* dirs = nullptr);

/// The check multiplier process at split k and evaluation point X_q
/// (orthant indexing); k and q are 1-based.
double check_process_value(const Sample& s, const Eigen::VectorXd& xi, Eigen::Index k,
                           Eigen::Index q);

}  // namespace cpd::oracle
