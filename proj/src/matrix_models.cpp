#include "fglab/matrix_models.hpp"

#include <sstream>
#include <stdexcept>

namespace fglab {

namespace {

i64 mod(i64 x, i64 m) {
  x %= m;
  return x < 0 ? x + m : x;
}

i64 inverse_mod(i64 a, i64 m) {
  i64 r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i64 t = r0 / r1;
    r0 -= t * r1;
    std::swap(r0, r1);
    s0 -= t * s1;
    std::swap(s0, s1);
  }
  return mod(s0, m);
}

// Rank by elimination using only unit pivots mod p^k.
int unit_pivot_rank(std::vector<std::vector<i64>> M, i64 p, i64 modulus) {
  const int rows = static_cast<int>(M.size());
  const int cols = rows ? static_cast<int>(M[0].size()) : 0;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (mod(M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], p) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[static_cast<std::size_t>(rank)], M[static_cast<std::size_t>(piv)]);
    auto& P = M[static_cast<std::size_t>(rank)];
    const i64 inv = inverse_mod(P[static_cast<std::size_t>(c)], modulus);
    for (auto& x : P) x = mod(x * inv, modulus);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      auto& Rr = M[static_cast<std::size_t>(r)];
      const i64 t = mod(Rr[static_cast<std::size_t>(c)], modulus);
      if (t == 0) continue;
      for (int k = 0; k < cols; ++k)
        Rr[static_cast<std::size_t>(k)] = mod(Rr[static_cast<std::size_t>(k)] - t * P[static_cast<std::size_t>(k)], modulus);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

IntMatrix IntMatrix::identity(int n) {
  IntMatrix I(n);
  for (int i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

IntMatrix IntMatrix::mul_mod(const IntMatrix& o, i64 modulus) const {
  if (o.size != size) throw std::invalid_argument("IntMatrix: size mismatch");
  IntMatrix out(size);
  for (int i = 0; i < size; ++i)
    for (int k = 0; k < size; ++k) {
      const i64 x = (*this)(i, k);
      if (x == 0) continue;
      for (int j = 0; j < size; ++j) out(i, j) = mod(out(i, j) + x * o(k, j), modulus);
    }
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < size; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < size; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

BlockMatrixSpec build_phi_zeta(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("build_phi_zeta: m and n must be positive");
  BlockMatrixSpec s;
  s.m = m;
  s.n = n;
  s.hr = m * n;
  s.A = IntMatrix(m);
  for (int i = 0; i < m; ++i) s.A((i + 1) % m, i) = 1;
  s.phi = IntMatrix(s.hr);
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s.phi(b * m + i, b * m + j) = s.A(i, j);
  return s;
}

RelationCheck check_relations(const IntMatrix& Y, i64 modulus) {
  const int m = Y.size;
  const IntMatrix A = build_phi_zeta(m, 1).A;
  RelationCheck r;
  r.commutes = A.mul_mod(Y, modulus) == Y.mul_mod(A, modulus);
  r.circulant = true;
  for (int i = 0; i < m && r.circulant; ++i)
    for (int k = 1; k < m; ++k)
      if (mod(Y(k, (k + i) % m) - Y(0, i), modulus) != 0) {
        r.circulant = false;
        break;
      }
  return r;
}

RelationSweep exhaustive_relation_sweep(int m, u64 p) {
  RelationSweep s;
  s.m = m;
  s.p = p;
  const int cells = m * m;
  IntMatrix Y(m);
  const u64 total = ipow(p, static_cast<unsigned>(cells));
  for (u64 code = 0; code < total; ++code) {
    u64 c = code;
    for (int k = 0; k < cells; ++k) {
      Y.a[static_cast<std::size_t>(k)] = static_cast<i64>(c % p);
      c /= p;
    }
    const RelationCheck r = check_relations(Y, static_cast<i64>(p));
    ++s.total;
    s.commuting += r.commutes;
    s.circulant += r.circulant;
    s.disagreements += !r.agree();
  }
  return s;
}

CommutantDimension commutant_dimension(const BlockMatrixSpec& spec, u64 p) {
  const int h = spec.hr;
  const int vars = h * h;
  // row (a, b): sum_k X(a,k) phi(k,b) - phi(a,k) X(k,b)
  std::vector<std::vector<i64>> M(static_cast<std::size_t>(vars), std::vector<i64>(static_cast<std::size_t>(vars), 0));
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < h; ++b) {
      auto& row = M[static_cast<std::size_t>(a * h + b)];
      for (int k = 0; k < h; ++k) {
        row[static_cast<std::size_t>(a * h + k)] += spec.phi(k, b);
        row[static_cast<std::size_t>(k * h + b)] -= spec.phi(a, k);
      }
    }
  CommutantDimension d;
  const i64 ip = static_cast<i64>(p);
  d.rank_mod_p = unit_pivot_rank(M, ip, ip);
  d.rank_mod_p2 = unit_pivot_rank(M, ip, ip * ip);
  d.dimension = vars - d.rank_mod_p;
  d.expected = spec.n * spec.n * spec.m;
  return d;
}

u64 unit_quotient_order(u64 q_h, int n) {
  if (n < 1) throw std::invalid_argument("unit_quotient_order: n must be positive");
  return (q_h - 1) * ipow(q_h, static_cast<unsigned>(n - 1));
}

}  // namespace fglab
