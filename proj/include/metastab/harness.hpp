#pragma once

#include <cstdint>
#include <string>

#include "metastab/config.hpp"

namespace metastab {

struct RunStats {
  std::size_t units_total = 0;
  std::size_t units_computed = 0;
  std::size_t units_skipped = 0;  // manifest hits under resume
};

// Full pipeline over the (n, seed) grid: generate, extract the maximal
// component, estimate the extinction time, write results.csv and summary.json
// under cfg.out_dir. Completed units are journaled in manifest.jsonl keyed by
// a content hash of the unit parameters; resume skips journaled units and the
// outputs are regenerated from the journal in (n, seed) order, so they do not
// depend on worker count or interruption history.
RunStats run_experiment(const ExperimentConfig& cfg);

// content hash of one (config, n, seed_index) work unit
std::uint64_t unit_key(const ExperimentConfig& cfg, long n, std::size_t seed_index);

std::uint64_t fnv1a(const std::string& s);

}  // namespace metastab
