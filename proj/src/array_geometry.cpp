#include "nestar/array_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "nestar/errors.hpp"

namespace nestar {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool contiguous_from_one(const std::vector<int>& pos) {
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (pos[i] != static_cast<int>(i) + 1) return false;
  }
  return true;
}

}  // namespace

ArrayGeometry build_nested(int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw ConfigError("nested array parameters must be non-negative");
  if (n1 + n2 < 1) throw ConfigError("nested array requires n1 + n2 >= 1");
  std::set<int> pos;
  for (int m = 1; m <= n1; ++m) pos.insert(m);
  for (int k = 1; k <= n2; ++k) pos.insert(k * (n1 + 1));
  ArrayGeometry g;
  g.positions.assign(pos.begin(), pos.end());
  g.kind = ArrayKind::nested;
  g.n1 = n1;
  g.n2 = n2;
  g.ula_equivalent = contiguous_from_one(g.positions);
  return g;
}

ArrayGeometry build_ula(int m) {
  if (m < 1) throw ConfigError("ULA requires at least one element");
  ArrayGeometry g;
  g.positions.resize(m);
  for (int i = 0; i < m; ++i) g.positions[i] = i + 1;
  g.kind = ArrayKind::ula;
  g.ula_equivalent = true;
  return g;
}

ArrayGeometry build_custom(std::vector<int> positions) {
  if (positions.empty()) throw ConfigError("custom geometry requires at least one position");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 1) throw ConfigError("positions must be positive integers");
    if (i > 0 && positions[i] <= positions[i - 1])
      throw ConfigError("positions must be strictly increasing");
  }
  ArrayGeometry g;
  g.positions = std::move(positions);
  g.kind = ArrayKind::custom;
  g.ula_equivalent = contiguous_from_one(g.positions);
  return g;
}

bool CoArray::has_lag(int lag) const {
  return std::binary_search(lags.begin(), lags.end(), lag);
}

const std::vector<std::pair<int, int>>& CoArray::pairs_for(int lag) const {
  auto it = std::lower_bound(lags.begin(), lags.end(), lag);
  if (it == lags.end() || *it != lag) throw DomainError("lag not present in co-array");
  return pairs[static_cast<std::size_t>(it - lags.begin())];
}

CoArray difference_coarray(const ArrayGeometry& geom) {
  const int m = geom.size();
  std::map<int, std::vector<std::pair<int, int>>> by_lag;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int lag = geom.positions[i] - geom.positions[j];
      if (lag >= 0) by_lag[lag].emplace_back(i, j);
    }
  }
  CoArray ca;
  ca.num_sensors = m;
  ca.lags.reserve(by_lag.size());
  ca.pairs.reserve(by_lag.size());
  for (auto& [lag, prs] : by_lag) {
    ca.lags.push_back(lag);
    ca.pairs.push_back(std::move(prs));
  }
  int ext = 0;
  while (ca.has_lag(ext)) ++ext;
  ca.contiguous_extent = ext;
  return ca;
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double angle_rad) {
  if (!(std::abs(angle_rad) < kPi / 2))
    throw DomainError("steering angle must lie strictly inside (-pi/2, pi/2)");
  return steering_vector_sin(geom, std::sin(angle_rad));
}

Eigen::VectorXcd steering_vector_sin(const ArrayGeometry& geom, double sin_theta) {
  const int m = geom.size();
  Eigen::VectorXcd a(m);
  for (int i = 0; i < m; ++i) {
    const double phase = kPi * (geom.positions[i] - 1) * sin_theta;
    a(i) = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return a;
}

std::string format_geometry(const ArrayGeometry& geom) {
  std::ostringstream out;
  switch (geom.kind) {
    case ArrayKind::nested:
      out << "nested:" << geom.n1 << "," << geom.n2;
      break;
    case ArrayKind::ula:
      out << "ula:" << geom.size();
      break;
    case ArrayKind::custom:
      out << "custom:";
      for (int i = 0; i < geom.size(); ++i) {
        if (i) out << ",";
        out << geom.positions[i];
      }
      break;
  }
  return out.str();
}

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("invalid integer '" + item + "' in geometry spec");
    }
    if (used != item.size()) throw ConfigError("invalid integer '" + item + "' in geometry spec");
    vals.push_back(v);
  }
  return vals;
}

}  // namespace

ArrayGeometry parse_geometry(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("geometry must look like nested:N1,N2 | ula:M | custom:p1,p2,...");
  const std::string tag = text.substr(0, colon);
  const std::vector<int> vals = parse_int_list(text.substr(colon + 1));
  if (tag == "nested") {
    if (vals.size() != 2) throw ConfigError("nested geometry needs exactly two parameters");
    return build_nested(vals[0], vals[1]);
  }
  if (tag == "ula") {
    if (vals.size() != 1) throw ConfigError("ula geometry needs exactly one parameter");
    return build_ula(vals[0]);
  }
  if (tag == "custom") return build_custom(vals);
  throw ConfigError("unknown geometry kind '" + tag + "'");
}

}  // namespace nestar
