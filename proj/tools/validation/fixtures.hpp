#pragma once

#include <array>
#include <cstdint>

#include <holonomy/holonomy.hpp>

// Curve and surface generators shared by the acceptance checks and the CLI.
namespace holonomy::fixtures {

// Same samples without the carried frames, so consumers fall back to spectral frames.
DiscretizedPath strip_frames(const DiscretizedPath& path);

// Open curve Psi(s) = W exp(s * angle * A) E_k on [0, 1], with W a random unitary,
// A a real antisymmetric generator of unit spectral norm and E_k the first k
// canonical vectors. All overlaps are real, and positive for angle < pi / 2, so
// the curve is a null phase curve. `plane` restricts A to the (1, k+1) plane:
// a great circle on the first level, the other levels fixed (needs n > k).
Curve real_rotation(const SpectralWeights& weights, int n, double angle, std::uint64_t seed,
                    bool plane = false);

// Three open segments around a random geodesic-free triangle of frames: corners
// exp(i Y_c) Psi0, sides bent off the straight generator path by sin(pi t) Z.
std::array<DiscretizedPath, 3> random_triangle(const SpectralWeights& weights, int n,
                                               double scale, std::uint64_t seed, int steps);

// rho(u, v) = project(W exp(scale (u A + v B)) E_k): real frames, a null phase patch.
ParametrizedSurface real_patch(const SpectralWeights& weights, int n, double scale,
                               std::uint64_t seed);
// rho(u, v) = U(u, v) rho0 U^dagger with two generic Hermitian directions: not isotropic.
ParametrizedSurface generic_patch(const SpectralWeights& weights, int n, double scale,
                                  std::uint64_t seed);
// A patch that only moves along u, along a curve with nonzero phase: isotropic
// (one-dimensional image) but not a null phase patch.
ParametrizedSurface ruled_patch(const SpectralWeights& weights, int n, double scale,
                                std::uint64_t seed);
ParametrizedSurface constant_patch(const SpectralWeights& weights, int n, std::uint64_t seed);

// Random frame-space tangent at `frame`: Hermitian h and chi orthogonal to the frame.
FrameTangent random_tangent(SplitMix64& rng, const Frame& frame, double scale = 0.5);

}  // namespace holonomy::fixtures
