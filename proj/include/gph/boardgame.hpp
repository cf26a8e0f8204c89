#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gph {

/// Interaction-order sequence of a Duhamel expansion: base level k and one
/// entry p_j per column, with running sums Q_j = p_1 + ... + p_j (Q_0 = 0).
struct PSequence {
  std::size_t k = 1;
  std::vector<int> p;
  std::vector<int> Q;  // Q[j], j = 0..n
  std::size_t n() const { return p.size(); }
  int p0() const;  // max entry
};

PSequence make_psequence(std::size_t k, std::vector<int> p);

/// One highlighted row per column; rows[j-1] is the 1-based highlight row of
/// column j, constrained by rows[j-1] <= k + Q_{j-1}.
struct CollapsingMap {
  PSequence pseq;
  std::vector<int> rows;
};

CollapsingMap make_map(PSequence pseq, std::vector<int> rows);

/// A map together with the permutation of the n time labels; sigma[m-1] is the
/// column label occupying position m of the descending time chain
/// t_top >= t_{sigma(1)} >= ... >= t_{sigma(n)}.
struct TaggedConfiguration {
  CollapsingMap map;
  std::vector<int> sigma;
};

TaggedConfiguration tag_identity(CollapsingMap map);

bool operator==(const CollapsingMap& a, const CollapsingMap& b);
bool operator==(const TaggedConfiguration& a, const TaggedConfiguration& b);

/// Number of maps Prod_j (k + Q_{j-1}).
unsigned long long map_count(const PSequence& pseq);

/// All collapsing maps; throws when map_count exceeds `cap`.
std::vector<CollapsingMap> enumerate_maps(const PSequence& pseq,
                                          unsigned long long cap = 1000000);

/// A move at position j (1 <= j <= n-1) needs the highlight of column j+1
/// strictly above the highlight of column j.
bool movable(const TaggedConfiguration& config, std::size_t j);

/// The acceptable move at j: swaps the two column highlights, exchanges
/// highlight rows k+Q_{j-1}+r <-> k+Q_j+r for r = 1..min(p_j, p_{j+1}) in the
/// columns to the right, and composes sigma with the transposition of the two
/// column time labels.
TaggedConfiguration apply_move(const TaggedConfiguration& config, std::size_t j);

/// Same exchange recipe gated on the opposite row order; inverts apply_move.
TaggedConfiguration invert_move(const TaggedConfiguration& config, std::size_t j);

/// True iff highlight rows are non-decreasing left to right.
bool is_special_echelon(const CollapsingMap& map);

struct Reduction {
  TaggedConfiguration config;
  std::size_t moves = 0;
};

/// Deterministic policy: repeatedly apply the move at the smallest movable j
/// until the map is in special upper-echelon form; sigma starts from the
/// identity and records the composed transpositions.
Reduction reduce_to_echelon(const CollapsingMap& map);

struct EchelonClass {
  CollapsingMap representative;
  std::vector<TaggedConfiguration> members;  // original map + reduction sigma
};

std::vector<EchelonClass> classify_all(const PSequence& pseq,
                                       unsigned long long cap = 1000000);

struct CountBoundRecord {
  unsigned long long maps = 0;
  std::size_t classes = 0;
  std::size_t largest_class = 0;
  unsigned long long bound = 0;  // 2^(k + (p0+1)(n-1))
  std::size_t max_moves = 0;
  bool partition_ok = false;
  bool sigmas_distinct = false;
  bool bound_ok = false;
};

CountBoundRecord count_bound_check(const PSequence& pseq,
                                   unsigned long long cap = 1000000);

/// Volume of the union of the order simplices of the class members:
/// |members| * t^n / n! (distinct sigmas intersect in measure zero).
/// Throws if two members share a sigma.
double class_domain_volume(const EchelonClass& cls, double t);

/// Highlight matrix in the paper's layout; highlighted entries are bracketed.
std::string render(const TaggedConfiguration& config);

}  // namespace gph
