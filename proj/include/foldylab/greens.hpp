#pragma once

#include "foldylab/types.hpp"

namespace foldylab::greens {

/// Outgoing free-space fundamental solution e^{i kappa |x-y|} / (4 pi |x-y|).
/// Throws CoincidentPointsError when x == y.
Complex phi(WaveNumber kappa, const Point3& x, const Point3& y);

/// Same kernel as a function of the distance r > 0.
Complex phi_of_distance(double kappa, double r);

/// Smooth part Phi_kappa - Phi_0, continuously extended to r = 0 where it
/// equals i kappa / (4 pi).
Complex p_smooth(WaveNumber kappa, const Point3& x, const Point3& y);
Complex p_smooth_of_distance(double kappa, double r);

/// Far-field kernel of Phi_kappa(., y) in direction xhat: e^{-i kappa xhat.y}/(4 pi).
/// xhat must be a unit vector to within 1e-12.
Complex far_kernel(WaveNumber kappa, const Vector3& xhat, const Point3& y);

/// Throws InvalidArgument if |v| differs from 1 by more than tol.
void require_unit(const Vector3& v, double tol = 1e-12);

}  // namespace foldylab::greens
