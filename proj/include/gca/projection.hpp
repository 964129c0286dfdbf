#pragma once

#include "gca/hom.hpp"

namespace gca {

/// View of a product alphabet G1 x G2 as the pair of its mixed-radix parts:
/// the first factor occupies the most significant digits.
struct TrackSplit {
  GroupPtr whole;
  GroupPtr g1, g2;
  std::int64_t radix2 = 1;  // |G2|

  Elem first(Elem e) const { return e / radix2; }
  Elem second(Elem e) const { return e % radix2; }
  Elem pair(Elem a, Elem b) const { return a * radix2 + b; }
};

/// Split a composite alphabet into its first k factors versus the rest.
TrackSplit split_alphabet(const GroupPtr& g, int k);

/// Halting certificate for a track projection: the least radius r at which
/// the identity-bordered kernel slices of width m stabilize, together with
/// the stabilized (d-1)-dimensional shift they stabilize to.
struct SyncRadius {
  int m = 1;
  int r = 0;
  ShiftPtr stabilized;  // over G2^m
};

struct TrackProjection {
  ShiftPtr shift;  // over G1, same dimension as the input
  SyncRadius radius;
  int shapes_processed = 0;
};

/// Width-n slices along axis 1: a (d-1)-dimensional shift over G^n. For
/// d = 1 the result is the 0-dimensional shift of allowed n-words.
ShiftPtr project_slice(const ShiftPtr& x, int n, const Budget& budget = {});

/// Cellwise projection onto the first part of a product alphabet, keeping
/// the dimension. The halting bound n = m + 2r + 1 is discovered through the
/// synchronization radius and certified in the result.
TrackProjection project_track(const ShiftPtr& x, const TrackSplit& split,
                              const Budget& budget = {});

/// Projection onto the second part (swap the tracks, then project).
TrackProjection project_track_second(const ShiftPtr& x, const TrackSplit& split,
                                     const Budget& budget = {});

/// Configurations c over G2 with (identity, c) in u. Purely syntactic on the
/// presentation: forbidden patterns whose first part is identity everywhere
/// survive as their second parts.
ShiftPtr cut_shift(const ShiftPtr& u, const TrackSplit& split);

/// Least radius of synchronization for x over G1 x G2 (searched from r = 1).
SyncRadius radius_of_sync(const ShiftPtr& x, const TrackSplit& split, const Budget& budget = {});

/// Keep the listed digit positions of a power alphabet (in the listed
/// order); the rest are projected away through project_track.
ShiftPtr select_tracks(const ShiftPtr& x, const std::vector<int>& keep, const Budget& budget = {});

/// Projection onto D x Z^k: the first d-k axes are restricted to the finite
/// shape D, the final k axes stay infinite. Composition of slicings and one
/// track selection; the output alphabet is G^D with D's cells in
/// lexicographic order.
ShiftPtr project_general(const ShiftPtr& x, int k, const Shape& d, const Budget& budget = {});

/// Relabel a two-factor alphabet by swapping the factors.
ShiftPtr swap_tracks(const ShiftPtr& x, const TrackSplit& split);

/// Presentation of F^{-1}(Y): forbids the domain presentation's patterns
/// plus every evaluable pattern whose local image is a forbidden pattern of
/// Y. The kernel is the special case Y = {identity}.
ShiftPtr preimage_shift(const Hom& f, const ShiftPtr& y, const Budget& budget = {});
ShiftPtr kernel_shift(const Hom& f, const Budget& budget = {});

/// The graph shift {(c, F(c)) : c in X} over G x H.
ShiftPtr graph_shift(const Hom& f, const ShiftPtr& x, const Budget& budget = {});

struct ImageResult {
  ShiftPtr shift;  // over the hom's target group
  bool automaton_path = false;
  std::optional<SyncRadius> radius;  // generic path only
};

enum class ImageRoute { Auto, Automaton, Generic };

/// F(X), constructed either by transducing the de Bruijn automaton and
/// recovering a block presentation (d = 1), or generically as the second
/// track projection of the graph shift.
ImageResult image_shift(const Hom& f, const ShiftPtr& x, const Budget& budget = {},
                        ImageRoute route = ImageRoute::Auto);

}  // namespace gca
