#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "wiener/exact_values.hpp"
#include "wiener/extended_real.hpp"
#include "wiener/lattice.hpp"
#include "wiener/weights.hpp"

namespace wiener {

using Complex = std::complex<double>;

/// Finitely supported Fourier coefficients of a function on the d-torus.
class CoefficientField {
 public:
  explicit CoefficientField(int d);

  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<LatticeVector, Complex>& entries() const noexcept { return entries_; }

  /// Stores c at k; c == 0 removes the entry.
  void set(const LatticeVector& k, Complex c);
  Complex at(const LatticeVector& k) const;
  CoefficientField scaled(Complex c) const;
  /// f with the coefficients on gamma removed.
  CoefficientField without(const IndexSet& gamma) const;
  /// max |k_i| over the support; 0 for the empty field.
  std::int64_t max_coordinate() const;

 private:
  int d_;
  std::map<LatticeVector, Complex> entries_;
};

/// JSON array of [[k...], re, im] triples.
std::string field_to_json(const CoefficientField& f);
CoefficientField field_from_json(const std::string& text, int d);

/// l_p norm of the coefficient moduli (sup for p = inf).
double sp_norm(const CoefficientField& f, double p);

/// l_q norm of f(k)/Psi_k with shell weights; f is in the class iff <= 1.
double class_norm(const CoefficientField& f, const WeightFunction& w, const ClassParams& params);

struct RankedTerm {
  LatticeVector k;
  double modulus;
};

/// Support ranked by decreasing modulus, ties by (shell under r, lexicographic).
std::vector<RankedTerm> greedy_order(const CoefficientField& f, double r = kInf);

/// The m leading terms of the greedy order.
IndexSet greedy_set(const CoefficientField& f, std::uint64_t m, double r = kInf);

struct SequenceNorm {
  double p;
};
struct GridNorm {
  double p;
  std::int64_t n = 0;  // points per axis; 0 picks the default with a doubling check
};
using NormSpace = std::variant<SequenceNorm, GridNorm>;

/// Norm of f - G_m(f).
double greedy_residual(const CoefficientField& f, std::uint64_t m, const NormSpace& space, double r = kInf);

/// Rectangle rule for (mean |f|^p)^(1/p) on the uniform n^d grid; max for p = inf.
double lp_grid_norm(const CoefficientField& f, double p, std::int64_t n);

/// 8x the alias-free size 2 max|k_i| + 1.
std::int64_t default_grid_size(const CoefficientField& f);

struct GridEstimate {
  double value;
  double change;  // |value(2n) - value(n)|
  std::int64_t n;
};

/// lp_grid_norm at the default size and at twice that size.
GridEstimate lp_norm_estimate(const CoefficientField& f, double p);

enum class ExtremalKind { H1, H2, H3, H4 };

ExtremalKind parse_extremal(const std::string& name);

/// Flat extremal functions of the L_p lower bounds. H4 uses gamma when given,
/// otherwise the optimal m-set.
CoefficientField extremal(ExtremalKind kind, const ClassParams& params, const WeightFunction& w, std::uint64_t m,
                          const IndexSet* gamma = nullptr);

}  // namespace wiener
