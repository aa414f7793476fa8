#pragma once

// Formal group laws over W(F_{p^f}) and their module structures: Lubin-Tate
// groups, functional-equation (Honda) groups, heights, logarithms and
// unramified base change.

#include <optional>
#include <string>
#include <vector>

#include "fglab/padic.hpp"
#include "fglab/series.hpp"

namespace fglab {

/// A polynomial f with f = pX mod X^2 and f = X^{p^h} mod p, coefficients in
/// the subring O_F of residue degree d, where d | h.  h = d is the Lubin-Tate
/// case proper; larger h gives a formal O_F-module of height h/d over O_F.
struct FrobeniusSeries {
  TruncSeries1 f;
  int d = 1;
  int h = 1;

  /// Checks the shape conditions; throws std::invalid_argument otherwise.
  static FrobeniusSeries validated(TruncSeries1 f, int d);
  /// pX + X^{p^h}; h defaults to d.
  static FrobeniusSeries standard(const RingPtr& ring, int d, int h = 0);
  /// (1 + X)^p - 1.
  static FrobeniusSeries multiplicative(const RingPtr& ring);

  /// p^d.
  u64 residue_size() const;
  /// p^h, the degree of f mod p.
  u64 reduction_degree() const;
  TruncSeries1 at_degree(int D) const { return f.resized(D); }
};

// ---- group-law level operations -------------------------------------------

/// lambda(X) = integral of dt / (dF/dY)(t, 0).
ScaledSeries1 logarithm(const TruncSeries2& F);
ScaledSeries1 exponential(const TruncSeries2& F);
/// The series iota with F(X, iota(X)) = 0.
TruncSeries1 formal_negation(const TruncSeries2& F);

struct AxiomReport {
  bool unit = false;
  bool commutative = false;
  bool associative = false;
  int assoc_degree = 0;
  bool ok() const { return unit && commutative && associative; }
};
/// Unit and commutativity at the full truncation; associativity up to
/// total degree `assoc_degree`.
AxiomReport check_group_axioms(const TruncSeries2& F, int assoc_degree = 12);
/// g(F(X, Y)) = F(g(X), g(Y)) at the truncation of F.
bool is_endomorphism_of(const TruncSeries1& g, const TruncSeries2& F);

/// Height from a [p]-series: h such that the first unit coefficient sits at
/// p^h.  std::nullopt when no unit coefficient occurs below the truncation.
/// Throws CertificationError when the first unit index is not a power of p.
std::optional<int> height_of(const TruncSeries1& p_series);

/// Solves lambda(g) = a * lambda(X) for g = aX + ... by Newton iteration.
/// Lambda = p^shift * lambda must be integral and dlog = lambda' integral with
/// unit constant term.  On success the series is exact modulo
/// p^(N - shift) of the working ring; otherwise `first_obstruction` holds the
/// first degree at which g fails to be integral.
struct LogConjugateResult {
  std::optional<TruncSeries1> series;
  int first_obstruction = -1;
};
LogConjugateResult solve_log_conjugate(const TruncSeries1& Lambda, int shift, const TruncSeries1& dlog,
                                       const UnramifiedRingElem& a);

/// Coefficient-wise lift to a finer ring, taking the representative of least
/// absolute value so that small negative integers survive.
UnramifiedRingElem signed_lift(const UnramifiedRingElem& a, const RingPtr& W);

/// The unique g = aX + ... with f(g) = g(f) to degree D, for f a Frobenius
/// series.  Throws CertificationError if no integral solution exists.
TruncSeries1 commuting_series(const TruncSeries1& f, const ExactScalar& a, int D);

// ---- module level -----------------------------------------------------------

enum class GroupKind { LubinTate, Honda };

class FormalModule {
 public:
  static constexpr int kDefaultLawDegree = 12;

  static FormalModule lubin_tate(const FrobeniusSeries& f, int law_degree = kDefaultLawDegree);
  static FormalModule honda(const RingPtr& ring, std::vector<UnramifiedRingElem> u,
                            int law_degree = kDefaultLawDegree);
  static FormalModule multiplicative(const RingPtr& ring, int law_degree = kDefaultLawDegree);

  GroupKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  const RingPtr& ring() const { return ring_; }
  const TruncSeries2& law() const { return law_; }
  TruncSeries2 law_at(int D) const;

  /// Residue degree of the ring O_F acting through the module structure
  /// (1 means Z_p only).
  int structure_degree() const { return kind_ == GroupKind::LubinTate ? frob_->d : 1; }
  const std::optional<FrobeniusSeries>& frobenius_series() const { return frob_; }
  const std::vector<UnramifiedRingElem>& honda_u() const { return u_; }

  TruncSeries1 p_series(int D) const;
  /// Lubin-Tate [p]-series are polynomials stored exactly.
  bool p_series_is_polynomial() const { return kind_ == GroupKind::LubinTate; }
  /// [a] to degree D.  For Lubin-Tate modules a must lie in O_F; for Honda
  /// groups any a with an integral solution is accepted.
  TruncSeries1 endomorphism(const ExactScalar& a, int D) const;
  /// Teichmuller lift of the fixed generator of F_{p^d}^*, d = structure_degree().
  ExactScalar structure_generator() const;

  std::optional<int> height(int h_max = 4) const;
  /// Coefficient-wise image over W(F_{p^{f'}}), f | f'.
  FormalModule base_change(int f_target) const;
  FormalModule at_precision(int N) const;

 private:
  FormalModule() = default;
  void build_law(int D);

  GroupKind kind_ = GroupKind::LubinTate;
  std::string label_;
  RingPtr ring_;
  TruncSeries2 law_;
  std::optional<FrobeniusSeries> frob_;
  std::vector<UnramifiedRingElem> u_;
};

/// Fixed-point logarithm data of a Honda group at truncation D: Lambda =
/// p^shift * lambda and dlog = lambda', both over a ring of precision N + shift + 1.
struct HondaLog {
  TruncSeries1 Lambda;
  TruncSeries1 dlog;
  int shift = 0;
};
HondaLog honda_logarithm(const RingPtr& ring, const std::vector<UnramifiedRingElem>& u, int D);

}  // namespace fglab
