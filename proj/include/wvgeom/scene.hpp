#pragma once

#include "wvgeom/blochgeo.hpp"
#include "wvgeom/majorana.hpp"

namespace wvgeom::scene {

/// Points closer to a common plane through the origin than this are
/// reported as near-coplanar in the caption.
inline constexpr double kNearCoplanar = 0.05;

/// Bloch-sphere picture of a decomposition: points "i", "i'", "f1".."f{N−1}",
/// great-circle arcs along every triangle edge, and one triangle (i, i', fj)
/// per post-state star annotated with its solid angle. Degenerate stars keep
/// their point and carry a NaN solid angle.
blochgeo::SceneGraph build_scene(const majorana::ArgumentDecomposition& decomp,
                                 int arc_samples = 33);

/// Octant projection of the Fubini–Study geodesic triangle spanned by three
/// qutrit states, with the triangle annotated by −2 arg of its Bargmann
/// invariant.
blochgeo::SceneGraph build_cp2_scene(const PureState& pre, const PureState& eff,
                                     const PureState& post, int arc_samples = 33);

}  // namespace wvgeom::scene
