#ifndef NESTAR_BEAM_PATTERN_HPP
#define NESTAR_BEAM_PATTERN_HPP

#include <optional>
#include <vector>

#include "nestar/array_geometry.hpp"

namespace nestar {

/// Beam pattern G(delta) of an array as a function of the spatial angle
/// difference delta = sin(theta_k) - sin(theta_i) in [-2, 2].
/// G(geom, 0) = 1 and 0 <= G <= 1.
double gain_direct(const ArrayGeometry& geom, double delta);

/// Closed-form decomposition of the nested-array pattern into an inner
/// Dirichlet term f, an outer Dirichlet term g and a phase offset phi:
///   G = (f^2 + g^2 + 2 f g cos(phi)) / M^2.
/// Removable singularities of f and g are evaluated by their limits.
struct PatternDecomposition {
  double f = 0.0;
  double g = 0.0;
  double phi = 0.0;
  double gain = 0.0;
};

PatternDecomposition gain_decomposed(int n1, int n2, double delta);

/// First null points of f, g and cos(phi): delta1 = 2/n1,
/// delta2 = 2/((n1+1) n2), delta3 = 1/((n1+1) n2).
struct NullPoints {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

NullPoints null_points(int n1, int n2);

/// Outer-size threshold above which the inner term is effectively constant
/// over the main lobe: floor(sqrt(10 n1^2 / (n1 + 1))).
int n_ap(int n1);

/// Largest n2 for which G decreases monotonically on (0, delta2]; found by
/// numeric differentiation on a dense grid. Returns 1 for n1 < 7.
int n_th(int n1);

/// Unique solution of cos(phi) = -g(phi)/(2 n1) on [pi/2, pi], mapped back to
/// delta. Requires the large-outer regime n2 > n_ap(n1).
double delta_int(int n1, int n2);

/// First local minimum point of G on (0, 2], located by a dense scan and
/// refined by golden section. Main lobe beam width is 2x this value.
double flmp_numeric(const ArrayGeometry& geom);

/// Local-minimum gain levels used by the PLMR bounds. p1 is unused by any
/// bound but exposed for completeness.
struct PTerms {
  double p1 = 0.0;  // G(delta1)
  double p2 = 0.0;  // G(delta2)
  double p3 = 0.0;  // G(delta3)
  double p4 = 0.0;  // G((n2-1) delta2)
  double p5 = 0.0;  // G(n2 delta2)
};

PTerms p_terms(int n1, int n2);

/// Peak-to-local-minimum ratio: closed-form lower bound (regime dependent)
/// and the numeric value 1/G(flmp).
struct PlmrBounds {
  double lower_bound = 1.0;
  double numeric = 1.0;
};

PlmrBounds plmr(int n1, int n2);

/// Dominating side lobes of the outer subarray at 2n/(n1+1). Predictions are
/// reliable only for n2 > n_ap; below that the lobes submerge in the inner
/// pattern and the entries are flagged.
struct GratingLobe {
  int order = 0;                  // n
  double position = 0.0;          // 2n/(n1+1)
  double predicted_height = 0.0;  // (n2-1)^2 / M^2
  double measured_position = 0.0;
  double measured_height = 0.0;
  bool reliable = false;
};

std::vector<GratingLobe> grating_lobes(int n1, int n2);

enum class LobeRegime { small_n2, mid_n2, large_n2, degenerate_ula };

struct BeamPatternMetrics {
  int n1 = 0;
  int n2 = 0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  int n_th = 0;
  int n_ap = 0;
  LobeRegime regime = LobeRegime::degenerate_ula;
  double flmp_lower = 0.0;
  double flmp_upper = 0.0;
  double flmp_numeric = 0.0;
  double bw = 0.0;
  double plmr_lower = 1.0;
  double plmr_numeric = 1.0;
  std::optional<double> delta_int;
  std::vector<GratingLobe> grating_lobes;
  double slh_predicted = 0.0;
};

/// Full metric record; degenerate configurations (n1 = 0 or n2 <= 1) bypass
/// the bound machinery and report plain ULA metrics.
BeamPatternMetrics metrics(int n1, int n2);

const char* to_string(LobeRegime regime);

}  // namespace nestar

#endif
