#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "apasp/engine.hpp"

namespace apasp {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// SP dag of one source, reconstructed from the engine's distance queries and
/// R*-set unions (supersets filtered by the distance check).
struct SPDag {
  Vertex source = 0;
  std::vector<std::vector<Vertex>> succ;  // dag edges (t, u) as succ[t] = {u...}
  std::vector<BigInt> sigma;              // path counts from the source
};

enum class BcMode { kRational, kDecimal };

struct BCScores {
  std::vector<BigRational> exact;  // rational mode
  std::vector<long double> approx; // decimal mode
  BcMode mode = BcMode::kRational;
};

SPDag build_sp_dag(const Engine& engine, Vertex s);

/// Brandes-style dependency accumulation over the per-source dags.
BCScores accumulate_bc(const Engine& engine, BcMode mode = BcMode::kRational);

/// Output format: one line per vertex "v<TAB>num/den" (rational) or
/// "v<TAB>decimal" with the given number of digits, sorted by v.
std::string format_bc(const BCScores& scores, int decimal_digits = 12);

}  // namespace apasp
