#pragma once

#include "csarp/scenarios/report.hpp"
#include "csarp/scenarios/scenario.hpp"

namespace csarp::scenarios {

struct RunOptions {
    unsigned threads = 0;  // 0: one per hardware thread
};

// Seed of Monte Carlo trial i; a pure function of (base, i).
std::uint64_t trial_seed(std::uint64_t base, std::uint32_t index) noexcept;

// Validates, runs and checks expectations. Deterministic for a given scenario.
// Propagates ValidationError and simnet::SimError(TimeLimitExceeded).
Report run_scenario(const Scenario& s, const RunOptions& options = {});

}  // namespace csarp::scenarios
