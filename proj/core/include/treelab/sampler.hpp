#pragma once
// Uniform random labelled trees, two ways:
//
//  * Two-stage construction. Stage I reads a uniform attachment vector
//    u = (u_1, ..., u_{n-1}) over {1..n} and builds the edges
//    {i+1, min(i, u_i)}; stage II applies a uniform random relabelling.
//    The composite law is exactly uniform over all n^{n-2} labelled trees.
//  * Prüfer decoding of a uniform sequence in {1..n}^{n-2}, which is a
//    bijection and therefore exactly uniform as well. The two samplers are
//    implemented independently so each can serve as the other's oracle.

#include <vector>

#include "treelab/numeric.hpp"
#include "treelab/tree.hpp"

namespace treelab {

// Attachment vector (u_1 .. u_{n-1}), entries in {1..n}.
using AttachmentVector = std::vector<int>;

// Prüfer sequence of length n-2, entries in {1..n}.
using PruferSequence = std::vector<int>;

// Stage I skeleton of the two-stage sampler: edge {i+1, min(i, u_i)} for each
// i = 1..n-1. Throws std::invalid_argument ("malformed vector") if entries
// are out of range; the implied n is u.size() + 1.
LabelledTree aldous_broder_stage1(const AttachmentVector& u);

// Draws the attachment vector for stage I from a stream.
AttachmentVector sample_attachment(int n, RngStream& rng);

// Uniform permutation of {1..n} by Fisher-Yates; result[v-1] is the new
// label of v, directly usable with relabel().
std::vector<int> sample_permutation(int n, RngStream& rng);

// Exactly uniform tree on {1..n}: stage I followed by stage II.
LabelledTree sample_uniform(int n, SeedSpec seed);
LabelledTree sample_uniform(int n, RngStream& rng);

// Prüfer bijection. decode maps {1..n}^{n-2} onto trees (n >= 2; the empty
// sequence decodes to the single edge {1,2}); encode inverts it by
// repeatedly stripping the smallest-labelled leaf. decode(encode(t)) == t.
LabelledTree prufer_decode(const PruferSequence& seq, int n);
PruferSequence prufer_encode(const LabelledTree& t);

// Exactly uniform tree by decoding a uniform Prüfer sequence.
LabelledTree sample_prufer(int n, SeedSpec seed);
LabelledTree sample_prufer(int n, RngStream& rng);

}  // namespace treelab
