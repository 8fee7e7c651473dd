#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metastab/graph.hpp"

namespace metastab {

enum class ModelKind { Bond, Site, Rgg, Gw, Gff, RiOccupied, RiVacant };

std::string model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& s);

struct ModelSpec {
  ModelKind kind = ModelKind::Bond;
  int d = 2;
  double p = 0.7;                          // bond, site
  double R = 2.0;                          // rgg
  double u = 1.0;                          // ri-occupied, ri-vacant
  double h = 0.0;                          // gff
  int pad_factor = 4;                      // gff
  long kill_radius = 0;                    // ri; 0 means use 4n
  std::string nu = "0:0.25,1:0.25,2:0.5";  // gw offspring law "k:prob,..."

  BoxKind box_kind() const {
    return kind == ModelKind::Rgg ? BoxKind::Continuum : BoxKind::Lattice;
  }
  bool is_lattice() const {
    return kind != ModelKind::Rgg && kind != ModelKind::Gw;
  }
  bool operator==(const ModelSpec&) const = default;
};

struct ExperimentConfig {
  ModelSpec model;
  double lambda = 2.0;
  std::vector<long> n_list;
  std::size_t seeds_per_n = 1;
  std::size_t trials = 1000;
  std::optional<double> time_cap = 1e6;
  std::string out_dir;
  std::uint64_t master_seed = 0;
  bool resume = false;
  int workers = 0;  // 0 = hardware concurrency

  bool operator==(const ExperimentConfig&) const = default;
};

// Flat key-value text with one nested `model { ... }` block. '#' starts a
// comment. Throws ConfigError with the offending line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace metastab
