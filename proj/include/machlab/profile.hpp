#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "machlab/field.hpp"

namespace machlab {

struct DyadicPartition;

/// Nondecreasing weight Psi on {-1} U N, stored for q = -1..q_last.
///
/// Named profiles carry their closed form and use it off the stored range;
/// data profiles interpolate linearly between integer arguments and hold the
/// last stored value beyond it.
struct BesovProfile {
  std::string name;
  std::vector<double> values;  // values[q + 1]
  std::function<double(double)> closed_form;

  double ratio_bound = 1.0;       // max Psi(q+1)/Psi(q) over stored q
  double growth_exponent = 0.0;   // least alpha with Psi(q) <= Psi(-1) e^{alpha (q+1)}
  /// Operational proxy for unboundedness: Psi(q_last) > 10 Psi(-1).
  bool diverges = false;
  /// find_profile on an all-zero input; Psi = 1 carries no information.
  bool degenerate = false;

  int q_last() const noexcept { return static_cast<int>(values.size()) - 2; }
  /// Psi at a real argument x >= -1 (clamped below at -1).
  double at(double x) const;
};

/// Checks positivity, finiteness and monotonicity and fills the derived data.
/// Throws std::invalid_argument on violation.
BesovProfile validate_profile(std::vector<double> values, std::string name = "data",
                              std::function<double(double)> closed_form = {});

/// "constant", "power:a" (Psi(q) = (q+2)^a) or "exp:a" (Psi(q) = e^{a q}),
/// tabulated up to q_last.
BesovProfile make_named_profile(const std::string& spec, int q_last);

struct ProfileFit {
  BesovProfile profile;
  double plain_norm = 0.0;     // sum_q (2^{qs} ||Delta_q f||)^r, then 1/r
  double weighted_norm = 0.0;  // same with Psi(q) inserted
  /// weighted_norm / plain_norm, at most 2 by construction.
  double normalization = 1.0;
};

/// Constructive profile from a shell sequence a_q = 2^{qs}||Delta_q f||:
/// t(q) = sum_{j >= q} a_j^r, Psi(-1) = 1,
/// Psi(q) = max(Psi(q-1), min((t(-1)/t(q))^{1/(2r)}, 2 Psi(q-1))).
ProfileFit find_profile_from_shells(std::span<const double> weighted_shells, double r = 1.0);

ProfileFit find_profile(const DyadicPartition& part, std::span<const SpectralField> components,
                        double s, double p, double r = 1.0);
ProfileFit find_profile(const SpectralField& u, double s, double p, double r = 1.0);
/// Family version: shell norms are replaced by their sup over the members.
ProfileFit find_profile_family(const DyadicPartition& part,
                               std::span<const std::vector<SpectralField>> family, double s,
                               double p, double r = 1.0);

/// Two-column text "q psi" with '#' comments.
void write_profile(std::ostream& out, const BesovProfile& profile);
BesovProfile read_profile(std::istream& in);

}  // namespace machlab
