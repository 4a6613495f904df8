#ifndef NESTAR_ARRAY_GEOMETRY_HPP
#define NESTAR_ARRAY_GEOMETRY_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace nestar {

enum class ArrayKind { nested, ula, custom };

/// Linear array on the integer grid, positions in units of d0 = lambda/2.
/// Immutable after construction; values are cheap to copy and share.
struct ArrayGeometry {
  std::vector<int> positions;  // strictly increasing positive integers
  ArrayKind kind = ArrayKind::custom;
  int n1 = 0;  // nested parameters as requested (kind == nested)
  int n2 = 0;
  bool ula_equivalent = false;  // positions form a contiguous run starting at 1

  int size() const { return static_cast<int>(positions.size()); }
  int aperture() const { return positions.empty() ? 0 : positions.back() - positions.front(); }
};

/// Two-level nested array: inner ULA {1..n1} plus outer ULA {k(n1+1): k=1..n2}.
/// Degenerate parameter choices (n1 = 0, n2 = 0, or n2 = 1 with contiguous
/// result) are accepted and flagged ula_equivalent.
ArrayGeometry build_nested(int n1, int n2);

/// Compact half-wavelength ULA {1..m}.
ArrayGeometry build_ula(int m);

/// Arbitrary strictly increasing positive integer positions.
ArrayGeometry build_custom(std::vector<int> positions);

/// Difference co-array of a physical array. Non-negative lags only; the
/// negative side follows by symmetry.
struct CoArray {
  int num_sensors = 0;
  std::vector<int> lags;  // sorted distinct lags >= 0
  // pairs[k] lists all (i, j) with positions[i] - positions[j] == lags[k]
  std::vector<std::vector<std::pair<int, int>>> pairs;
  int contiguous_extent = 0;  // largest L with {0..L-1} all present

  bool has_lag(int lag) const;
  const std::vector<std::pair<int, int>>& pairs_for(int lag) const;
  /// Number of elements of the two-sided contiguous virtual ULA.
  int virtual_ula_size() const { return 2 * contiguous_extent - 1; }
};

CoArray difference_coarray(const ArrayGeometry& geom);

/// Steering vector a(theta): entry m is exp(j*pi*(d_m - 1)*sin(theta)).
/// Angle must lie strictly inside (-pi/2, pi/2).
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double angle_rad);

/// Steering vector parameterized by s = sin(theta) in [-1, 1].
Eigen::VectorXcd steering_vector_sin(const ArrayGeometry& geom, double sin_theta);

/// One-line text form: "nested:N1,N2" / "ula:M" / "custom:p1,p2,...".
std::string format_geometry(const ArrayGeometry& geom);
ArrayGeometry parse_geometry(const std::string& text);

}  // namespace nestar

#endif
