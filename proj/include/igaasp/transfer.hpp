#pragma once

#include "igaasp/assembly.hpp"

#include <optional>

namespace igaasp {

/// Boundary treatment of the vector H^1 space X_h under essential bc.
enum class AuxiliaryBoundary {
  Full,        // every component in H^1_0
  MatchTarget  // component c constrained only along directions where V(D) has a B factor
};

std::string to_string(AuxiliaryBoundary b);
AuxiliaryBoundary auxiliary_boundary_from_string(const std::string& s);

/// X_h for transfers into `target`.
TensorSpace build_auxiliary_space(const TensorSpace& target, AuxiliaryBoundary mode);

/// Matrices linking V(D) with its auxiliary spaces.
struct TransferSet {
  TensorSpace xh;               // vector H^1 space X_h
  TensorSpace potential_space;  // Grad (curl, 2-D div) or Curl (3-D div)
  SparseMat p_main;             // X_h -> V(D)
  SparseMat potential;          // G, R or C into V(D)
  std::optional<SparseMat> p_curl;  // xh_curl -> V(curl), 3-D div only
  std::optional<TensorSpace> xh_curl;
};

/// Block c: Q in direction c, identity elsewhere (bc-restricted).
SparseMat build_p_curl(const TensorSpace& xh, const TensorSpace& curl);
/// Block c: identity in direction c, Q elsewhere (bc-restricted).
SparseMat build_p_div(const TensorSpace& xh, const TensorSpace& div);

TransferSet build_transfer_set(const ProblemSpec& spec, AuxiliaryBoundary mode = AuxiliaryBoundary::Full);

/// Coefficients of the commuting quasi-interpolant of an analytic field:
/// Greville interpolation along B factors, histopolation along D factors.
/// Boundary coefficients of zero-trace factors are dropped, so f should
/// satisfy the essential bc of the space.
Vector quasi_interpolate(const TensorSpace& space, const VectorField& f);

}  // namespace igaasp
