#pragma once

#include <string>
#include <vector>

#include "flatlab/objective.hpp"

namespace flatlab {

/// One named objective family. `arity` is the exact parameter count, or -1
/// when the family takes a variable-length parameter vector (validated by the
/// builder). `flat_minima` returns representative closed-form flat minima
/// when these are known.
struct CatalogEntry {
  std::string name;
  int arity = 0;
  std::string params_doc;
  std::function<ObjectiveHandle(const Vec&)> build;
  std::function<std::vector<Vec>(const Vec&)> flat_minima;  // may be null
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry* find_catalog_entry(const std::string& name);

/// Builds the named objective, validating the parameter arity and values.
ObjectiveHandle build_catalog_objective(const std::string& name, const Vec& params);

/// Representative closed-form flat minima (empty when not known).
std::vector<Vec> catalog_flat_minima(const std::string& name, const Vec& params);

/// Names of the entries whose canonical parameters give a 2-d domain,
/// paired with those parameters (used by brute-force oracle sweeps).
std::vector<std::pair<std::string, Vec>> catalog_2d_instances();

/// Smooth entries with a reference base point for profile/duality sweeps.
struct SmoothInstance {
  std::string name;
  Vec params;
  Vec base;
};
std::vector<SmoothInstance> catalog_smooth_instances();

}  // namespace flatlab
