#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "baleq/graph.hpp"

namespace baleq {

struct BilinearError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Alternating bilinear map B : U x U -> W over F_p, given on a basis u_1..u_n
// of U by the coordinate vectors of B(u_i, u_j) for i < j; pairs absent from
// `structure` map to 0. The structure vectors must span W.
struct AlternatingMap {
    std::uint64_t p = 0;
    int n = 0;          // dim U
    std::size_t m = 0;  // dim W
    std::map<Edge, std::vector<std::uint64_t>> structure;  // nonzero B(u_i,u_j) only
};

// Graph on 1..n whose edges are the pairs with B(u_i, u_j) != 0.
Graph support_graph(const AlternatingMap& map);

// Rank of the structure vectors over F_p.
std::size_t structure_rank(const AlternatingMap& map);
bool spans_w(const AlternatingMap& map);                  // rank == m
bool independent_structure(const AlternatingMap& map);    // rank == #entries

// B(u, v) in W coordinates; u, v are coordinate vectors of length n
// (position i-1 is the u_i coefficient).
std::vector<std::uint64_t> evaluate(const AlternatingMap& map,
                                    const std::vector<std::uint64_t>& u,
                                    const std::vector<std::uint64_t>& v);

struct ImageDecision {
    enum class Kind { Witness, NotInImage, Unknown };
    Kind kind;
    std::optional<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> witness;
    bool oracle_verified = false;
    std::string reason;  // Unknown
};

// Is w in the image of B? Decided by solving for the weight vectors d with
// sum d_e B(u_i,u_j) = w and dispatching each weighted support graph to the
// labeling engine; witnesses are re-verified by direct expansion.
ImageDecision image_membership(const AlternatingMap& map, const std::vector<std::uint64_t>& w,
                               std::uint64_t budget = 100000000);

struct FullImageOutcome {
    bool full = false;
    std::optional<std::vector<std::uint64_t>> missing;  // W coordinates
};

// For structure vectors forming a basis of W and p >= 3: the image is all of
// W exactly when the support graph has no bad cycle; otherwise the returned
// missing element is the bad cycle's low-degree edge vector plus one
// attachment vector per high-degree cycle vertex. p = 2 is answered by
// exhaustive enumeration only.
FullImageOutcome full_image_check(const AlternatingMap& map, std::uint64_t budget = 100000000);

}  // namespace baleq
