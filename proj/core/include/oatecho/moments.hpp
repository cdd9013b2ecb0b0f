#pragma once

// Closed-form first and second moments of the echo protocol, with the
// analytic damping of collective and individual dephasing.

#include "oatecho/core.hpp"
#include "oatecho/linalg3.hpp"

namespace oatecho {

/// The nine scalars from which M, Q and j are assembled.
struct ScalarCoefficients {
  double n1 = 0.0, n2 = 0.0, n3 = 0.0, n4 = 0.0;
  double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;
};

/// M: signal matrix M_kl = i<[S_k(mu), S_l(nu)]>.
/// Q: symmetrized covariance of the measured spin.
/// j: first moments (<S_x>, <S_y>, <S_z>) of the measured spin.
struct MomentMatrices {
  Mat3 M{};
  Mat3 Q{};
  Vec3 j{};
};

/// Scalars with all dephasing factors applied. Collective and individual
/// damping compose multiplicatively when both are present.
ScalarCoefficients scalar_coefficients(const ProtocolPoint& point);

/// Builds the block-structured M, Q and j from already damped scalars.
MomentMatrices assemble(const ScalarCoefficients& s);

MomentMatrices moment_matrices(const ProtocolPoint& point);

}  // namespace oatecho
