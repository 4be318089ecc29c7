#pragma once

#include <cstdint>
#include <string>

namespace liasat {

enum class OrderPolicy { declaration, lexicographic };

enum class OracleMode { none, enumerate, qe, differential };

struct SolverConfig {
  std::uint64_t max_steps = 0;  // 0 = unlimited
  std::string trace_path;       // empty = no trace file
  OrderPolicy order_policy = OrderPolicy::declaration;
  bool emit_model = true;
  OracleMode oracle_mode = OracleMode::none;
  bool debug_checks = true;  // state invariants verified after every step
};

}  // namespace liasat
