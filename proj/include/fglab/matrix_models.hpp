#pragma once

// The block matrix phi([zeta]) with cyclic diagonal blocks, its commutant and
// the unit-quotient order.

#include <cstdint>
#include <string>
#include <vector>

#include "fglab/padic.hpp"

namespace fglab {

/// Dense square integer matrix, row-major.
struct IntMatrix {
  int size = 0;
  std::vector<i64> a;

  IntMatrix() = default;
  explicit IntMatrix(int n) : size(n), a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}
  static IntMatrix identity(int n);

  i64& operator()(int i, int j) { return a[static_cast<std::size_t>(i * size + j)]; }
  i64 operator()(int i, int j) const { return a[static_cast<std::size_t>(i * size + j)]; }
  bool operator==(const IntMatrix& o) const = default;

  IntMatrix mul_mod(const IntMatrix& o, i64 modulus) const;
  std::string to_string() const;
};

struct BlockMatrixSpec {
  int m = 0;
  int n = 0;
  int hr = 0;
  /// m x m cyclic permutation: A(i+1 mod m, i) = 1.
  IntMatrix A;
  /// hr x hr, n diagonal copies of A; basis (i, j) at index j*m + i.
  IntMatrix phi;
};

BlockMatrixSpec build_phi_zeta(int m, int n);

struct RelationCheck {
  bool commutes = false;
  /// Y satisfies every R(i): y_{k, k+i} is constant in k (indices mod m).
  bool circulant = false;
  bool agree() const { return commutes == circulant; }
};
/// AY = YA against R(0), ..., R(m-1), both over Z/modulus.
RelationCheck check_relations(const IntMatrix& Y, i64 modulus);

struct RelationSweep {
  int m = 0;
  u64 p = 0;
  u64 total = 0;
  u64 commuting = 0;
  u64 circulant = 0;
  u64 disagreements = 0;
};
/// check_relations on every m x m matrix over F_p.
RelationSweep exhaustive_relation_sweep(int m, u64 p);

struct CommutantDimension {
  int dimension = 0;
  int rank_mod_p = 0;
  /// Rank of the same system over Z/p^2 with unit pivots only; equal to
  /// rank_mod_p when the residue rank is the generic rank.
  int rank_mod_p2 = 0;
  int expected = 0;
  bool consistent() const { return rank_mod_p == rank_mod_p2; }
};
/// Dimension of {X : X phi = phi X} from the rank of the hr^2 x hr^2 system.
CommutantDimension commutant_dimension(const BlockMatrixSpec& spec, u64 p = 3);

/// (q_h - 1) q_h^{n-1}.
u64 unit_quotient_order(u64 q_h, int n);

}  // namespace fglab
