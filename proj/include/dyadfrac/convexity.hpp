#pragma once

// Midpoint-convexity certificates, hull gaps, the halving/density containment check and a
// resolution-level essential-convexity test.

#include "dyadfrac/dyadic.hpp"
#include "dyadfrac/schedule.hpp"
#include "dyadfrac/sumset.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dyadfrac {

/// A set of depth-n digit strings with a membership test and a sampler.
struct PointSet {
  std::uint64_t depth = 0;
  std::function<bool(const DigitString&)> contains;
  std::function<BigInt(std::mt19937_64&)> sample;
};

/// Every member of the rule union is a truncated point (prefix then zeros).
PointSet point_set(const RuleUnion& spec, std::uint64_t depth);
PointSet point_set(const FinalASpec& spec);
PointSet point_set(const CellCover& cover);

/// x = (m_1 + ... + m_j) / (j 2^depth) with every m_r / 2^depth a member of A.
struct WitnessedPoint {
  std::uint64_t depth = 0;
  std::vector<BigInt> members;

  std::uint64_t j() const { return members.size(); }
  BigInt sum() const;
  Rational value() const;
};

/// k copies of a's members followed by j copies of b's: a witness for (x + y) / 2 in A_{2jk} / (2jk).
WitnessedPoint midpoint_witness(const WitnessedPoint& a, const WitnessedPoint& b);
/// Membership of every member, the member count and the exact value; empty when all hold.
std::optional<std::string> verify_witness(const WitnessedPoint& w, const PointSet& a, const Rational& value);

struct MidpointReport {
  std::uint64_t j_max = 0;
  std::uint64_t pairs = 0;
  std::uint64_t certified = 0;
  bool exhaustive = false;
  std::optional<std::pair<Rational, Rational>> violation;  // (x, y)
  std::string detail;

  bool all_certified() const { return pairs == certified; }
};

/// Seeded pairs with j, k uniform in [1, j_max].
MidpointReport midpoint_certify(const PointSet& a, std::uint64_t j_max, std::uint64_t samples, std::uint64_t seed);
/// Every pair of witnessed points built from multisets of cover points, when the count fits `limit`.
MidpointReport midpoint_certify_exhaustive(const CellCover& a, std::uint64_t j_max, std::uint64_t limit);

/// Gaps of a rational cover inside its hull, numerators over `denominator`.
struct HullGapReport {
  BigInt denominator = 1;
  BigInt hull_lo;
  BigInt hull_hi;
  std::vector<std::pair<BigInt, BigInt>> gaps;
  std::uint64_t j_max = 0;
  std::string caveat;
};
HullGapReport hull_gap(const RationalCover& e, std::uint64_t j_max);

/// Points at base depth d mapped by x -> (x + k y) / 2^g for 0 <= k <= 2^g must land in the targets.
struct DensityCheckRow {
  std::uint64_t generation = 0;
  std::uint64_t k = 0;
  std::uint64_t source_count = 0;  // source points within radius of y
  std::uint64_t target_count = 0;  // target points within radius 2^-g r0 of y_{k,g}
  std::optional<std::uint64_t> missing;  // a source index whose image is absent
  bool pass = true;
};
struct DensityCheckReport {
  std::uint32_t base_depth = 0;
  std::uint64_t y_index = 0;
  std::uint64_t radius_cells = 0;  // r0 = radius_cells 2^-base_depth
  std::vector<DensityCheckRow> rows;
  bool all_pass() const;
};
/// source: exact points at depth d (span may exceed 1); targets[g-1]: exact points at depth d + g.
DensityCheckReport halving_density_check(const CellCover& source, const std::vector<CellCover>& targets,
                                         std::uint64_t y_index, std::uint64_t radius_cells);

/// Cells of a d-dimensional grid of `side` cells per axis, d <= 3.
struct GridCells {
  std::uint32_t dims = 1;
  std::uint64_t side = 1;
  std::vector<std::array<std::uint64_t, 3>> cells;
};

/// base × [0,1)^extra_dims with the base given as cells of a 1-dimensional grid.
struct ProductForm {
  std::uint64_t side = 1;
  std::vector<std::uint64_t> base;
  std::uint32_t extra_dims = 0;
};

struct EssentialConvexityVerdict {
  bool essentially_convex = false;
  std::uint32_t subspace_dim = 0;  // axis-aligned affine span
  std::optional<std::array<std::uint64_t, 3>> interior_witness;
  std::uint64_t hull_cells = 0;
  std::uint64_t gap_cells = 0;
  std::vector<std::array<std::uint64_t, 3>> interior_gaps;  // gaps away from the hull boundary (first few)
  std::string note;
};

/// The hull is cut out by half-spaces with normals in {-2..2}^d: exact for d = 1, an outer
/// approximation of the convex hull otherwise.
EssentialConvexityVerdict essential_convexity_test(const GridCells& g);
EssentialConvexityVerdict essential_convexity_test(const ProductForm& p);

std::string format_midpoint_report(const MidpointReport& r);
std::string format_hull_report(const HullGapReport& r);
std::string format_density_report(const DensityCheckReport& r);
std::string format_essential_verdict(const EssentialConvexityVerdict& v);

}  // namespace dyadfrac
