#pragma once

#include <stdexcept>
#include <string>

namespace qms {

/// Single tolerance policy shared by every analysis stage. Immutable once an
/// analysis starts; all fields strictly positive.
struct TolerancePolicy {
  double rank_rel = 1e-10;         ///< relative singular-value cutoff
  double eig_cluster_abs = 1e-8;   ///< eigenvalue clustering radius
  double residual = 1e-8;          ///< generic assertion tolerance
  double hermitian = 1e-10;        ///< Hermitian structural tolerance
  double unitary = 1e-10;          ///< unitarity structural tolerance
  double faithful_min_eig = 1e-9;  ///< minimum eigenvalue for faithfulness

  void validate() const {
    auto chk = [](double v, const char* name) {
      if (!(v > 0.0))
        throw std::invalid_argument(std::string("tolerance field '") + name +
                                    "' must be strictly positive");
    };
    chk(rank_rel, "rank_rel");
    chk(eig_cluster_abs, "eig_cluster_abs");
    chk(residual, "residual");
    chk(hermitian, "hermitian");
    chk(unitary, "unitary");
    chk(faithful_min_eig, "faithful_min_eig");
  }

  /// Set a field by name ("rank_rel", "eig_cluster_abs", ...). Returns false
  /// for unknown names.
  bool set(const std::string& name, double value) {
    if (name == "rank_rel") rank_rel = value;
    else if (name == "eig_cluster_abs") eig_cluster_abs = value;
    else if (name == "residual") residual = value;
    else if (name == "hermitian") hermitian = value;
    else if (name == "unitary") unitary = value;
    else if (name == "faithful_min_eig") faithful_min_eig = value;
    else return false;
    return true;
  }
};

}  // namespace qms
