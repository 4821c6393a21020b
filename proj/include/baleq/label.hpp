#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "baleq/classify.hpp"
#include "baleq/graph.hpp"

namespace baleq {

// Vertex v -> (alpha_v, beta_v); consistent when
// alpha_i * beta_j - alpha_j * beta_i = d_{i,j} for every edge {i,j}, i < j.
struct Labeling {
    std::map<int, std::pair<RingElem, RingElem>> pairs;

    const std::pair<RingElem, RingElem>& at(int v) const;
    void set(int v, RingElem alpha, RingElem beta);
    bool has(int v) const { return pairs.count(v) != 0; }
};

// True iff every edge equation holds; throws on vertex-domain mismatch.
bool verify_labeling(const WeightedGraph& wg, const Labeling& lab);

struct LabelOutcome {
    enum class Kind { Labeled, NoSolution, Unknown };
    Kind kind;
    std::optional<Labeling> labeling;              // Labeled
    std::optional<ProximityReport> certificate;    // NoSolution, when one exists
    bool oracle_verified = false;                  // NoSolution confirmed by search
    std::string reason;                            // Unknown
};

// Trees label over any ring: unit x-labels (default all 1) are free, plus one
// free y-label (default (root, 0)); the remaining betas are forced.
Labeling label_tree(const WeightedGraph& wg,
                    const std::optional<std::map<int, RingElem>>& x_labels = std::nullopt,
                    const std::optional<std::pair<int, RingElem>>& free_y = std::nullopt);

// Cycle C_n (n > 3), p >= 3. Re-indexes internally so that s precedes r and
// v_r is not adjacent to the last vertex; pins alpha_s = a, beta_s = b,
// beta_{r+1} = c with a, c units. Alphas are units before r, betas after.
Labeling label_cycle(const WeightedGraph& wg, int s, int r, RingElem a, RingElem b, RingElem c);

// Cycle C_n (n > 3), any ring including p = 2; pins alpha_1 = a3,
// beta_{r+1} = a4 and drives residues toward a1 (alphas) and a2 (betas).
Labeling label_cycle_residue2(const WeightedGraph& wg, int r, RingElem a1, RingElem a2,
                              RingElem a3, RingElem a4);

// Triangles label over every Z/p^k.
Labeling label_triangle(const WeightedGraph& wg);

// Glues two verified labelings at a common-label vertex (v in wg1, w in wg2);
// returns the wedge-sum weighted graph plus the merged labeling.
std::pair<WeightedGraph, Labeling> merge_labelings(const WeightedGraph& wg1, const Labeling& lab1,
                                                   const WeightedGraph& wg2, const Labeling& lab2,
                                                   int v, int w);

// Borderless graph, no bad cycles, not C3, p >= 3; pins u -> (a, b) with a or
// b a unit; every anchor vertex receives at least one unit coordinate.
Labeling label_borderless(const WeightedGraph& wg, const Anchor& anchor, int u, RingElem a,
                          RingElem b);

// Net, no bad cycles, not C3, p >= 3; s has positive sigma-parity and gets
// (a, b) with a a unit; positive-parity vertices get unit alphas,
// negative-parity vertices unit betas.
Labeling label_net(const WeightedGraph& wg, const Anchor& anchor, const SignFunction& sigma,
                   int s, RingElem a, RingElem b);

// Top-level dispatcher; falls back to exhaustive search within
// oracle_budget nodes where the constructive lemmas do not apply.
LabelOutcome label_general(const WeightedGraph& wg,
                           std::uint64_t oracle_budget = 100000000);

// p = 2 (any local ring) dispatcher: requires all cycles to share a vertex
// and nets to be segment-gluable next to it; Unknown when the structural
// conditions fail.
LabelOutcome label_general_residue2(const WeightedGraph& wg, const Anchor& anchor);

}  // namespace baleq
