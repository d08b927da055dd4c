#pragma once

#include <string>
#include <vector>

#include "apasp/engine.hpp"

namespace apasp {

/// Structural invariant suite over the live tuple system: center-array sums,
/// beta vs P* membership, DM / RN / LN / L / R exactness, the level clock,
/// and per-level store consistency. Returns human-readable violations.
std::vector<std::string> check_structural(const Engine& engine);

struct VerifyOptions {
  std::size_t census_max_n = 8;  // exhaustive census checks only up to here
  bool check_censuses = true;
  bool check_bc = true;
  bool check_invariants = true;
};

/// Full oracle equivalence of the current engine state: distances and path
/// counts for every pair, exact BC, and (small instances) the LSP census
/// against P plus the per-level centered-ST census against each P*_i.
/// Returns the first mismatch as text, or empty when everything agrees.
std::string verify_against_oracle(const Engine& engine, const VerifyOptions& opt = {});

}  // namespace apasp
