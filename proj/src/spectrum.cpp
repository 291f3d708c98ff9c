#include "ebk/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <json.hpp>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "ebk/detail/parallel.hpp"
#include "ebk/errors.hpp"

namespace ebk {

Vec MaslovShift::resolved(int n) const {
  if (mu.size() == 0) return Vec::Zero(n);
  if (mu.size() != n) {
    throw Error(Errc::invalid_argument, "Maslov shift has dimension " + std::to_string(mu.size()) +
                                            ", expected " + std::to_string(n));
  }
  if (!mu.allFinite()) throw Error(Errc::invalid_argument, "Maslov shift must be finite");
  return mu;
}

bool is_primitive(const IntVec& k) {
  int g = 0;
  for (Eigen::Index j = 0; j < k.size(); ++j) g = std::gcd(g, std::abs(k(j)));
  return g == 1;
}

MarkedActionEntry multiple(const MarkedActionEntry& e, int l) {
  if (l < 1) throw Error(Errc::invalid_argument, "multiples are taken for l >= 1");
  return {(e.k * l).eval(), e.action * l, e.point};
}

namespace {

// Directions to try: primitive k in the box whose angle (n = 2) or sign
// pattern (n = 3) is compatible with the sampled normals.
std::vector<IntVec> candidate_directions(const LevelSurface& s, int k_max) {
  const int n = s.dimension();
  const auto samples = s.samples();
  std::vector<std::vector<IntVec>> rows(static_cast<std::size_t>(2 * k_max + 1));
  if (n == 2) {
    double lo = std::numbers::pi, hi = -std::numbers::pi;
    for (const auto& smp : samples) {
      const double a = std::atan2(smp.normal(1), smp.normal(0));
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    constexpr double kSlack = 1e-12;
    detail::parallel_for(
        rows.size(),
        [&](std::size_t r) {
          const int k1 = static_cast<int>(r) - k_max;
          for (int k2 = -k_max; k2 <= k_max; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double a = std::atan2(static_cast<double>(k2), static_cast<double>(k1));
            if (a < lo - kSlack || a > hi + kSlack) continue;
            if (std::gcd(std::abs(k1), std::abs(k2)) != 1) continue;
            rows[r].push_back(ivec2(k1, k2));
          }
        },
        8);
  } else {
    std::array<bool, 3> nonneg{true, true, true}, nonpos{true, true, true};
    for (const auto& smp : samples) {
      for (int j = 0; j < 3; ++j) {
        if (smp.normal(j) < -1e-12) nonneg[static_cast<std::size_t>(j)] = false;
        if (smp.normal(j) > 1e-12) nonpos[static_cast<std::size_t>(j)] = false;
      }
    }
    detail::parallel_for(
        rows.size(),
        [&](std::size_t r) {
          const int k1 = static_cast<int>(r) - k_max;
          for (int k2 = -k_max; k2 <= k_max; ++k2) {
            for (int k3 = -k_max; k3 <= k_max; ++k3) {
              IntVec k(3);
              k << k1, k2, k3;
              bool ok = !k.isZero();
              for (int j = 0; j < 3 && ok; ++j) {
                if (nonneg[static_cast<std::size_t>(j)] && k(j) < 0) ok = false;
                if (nonpos[static_cast<std::size_t>(j)] && k(j) > 0) ok = false;
              }
              if (ok && is_primitive(k)) rows[r].push_back(k);
            }
          }
        },
        1);
  }
  std::vector<IntVec> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;  // rows are filled in lexicographic order
}

}  // namespace

std::vector<MarkedActionEntry> marked_action_spectrum(const LevelSurface& surface, int k_max,
                                                      const MaslovShift& shift) {
  if (k_max < 1) throw Error(Errc::invalid_argument, "k_max must be at least 1");
  const int n = surface.dimension();
  const Vec mu = shift.resolved(n);
  const std::vector<IntVec> dirs = candidate_directions(surface, k_max);

  std::vector<std::optional<MarkedActionEntry>> slots(dirs.size());
  detail::parallel_for(dirs.size(), [&](std::size_t i) {
    const IntVec& k = dirs[i];
    const Vec kd = k.cast<double>();
    GaussPreimage pre;
    try {
      pre = invert_gauss_map(surface, kd);
    } catch (const Error& e) {
      if (e.code() == Errc::direction_not_attained) return;
      throw;
    }
    const Vec& p = pre.points.front();
    const double a0 = p.dot(kd);
    for (std::size_t j = 1; j < pre.points.size(); ++j) {
      const double aj = pre.points[j].dot(kd);
      if (std::abs(aj - a0) > 1e-9 * std::max(1.0, std::abs(a0))) {
        throw Error(Errc::unsupported_surface,
                    "direction attained at points with different actions");
      }
    }
    const double a = (p + mu).dot(kd);
    if (std::abs(a) <= 1e-12 * kd.norm() * std::max(1.0, p.norm())) return;
    slots[i] = MarkedActionEntry{k, a, p};
  });

  std::vector<MarkedActionEntry> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

double billiard_orbit_action(double E, double R, int k, int l) {
  if (!(E > 0.0) || !(R > 0.0)) {
    throw Error(Errc::invalid_argument, "energy and radius must be positive");
  }
  if (l < 2 || k < 1 || k >= l) {
    throw Error(Errc::invalid_orbit_class, "winding ratio k/l must lie in (0, 1)");
  }
  return 2.0 * R * std::sqrt(2.0 * E) * l * std::sin(std::numbers::pi * k / l);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_actions_csv(std::ostream& out, std::span<const MarkedActionEntry> entries) {
  const Eigen::Index n = entries.empty() ? 2 : entries.front().k.size();
  for (Eigen::Index j = 0; j < n; ++j) out << "k_" << j + 1 << ',';
  out << "action";
  for (Eigen::Index j = 0; j < n; ++j) out << ",p_" << j + 1;
  out << '\n';
  for (const auto& e : entries) {
    for (Eigen::Index j = 0; j < n; ++j) out << e.k(j) << ',';
    out << format_number(e.action);
    for (Eigen::Index j = 0; j < n; ++j) out << ',' << format_number(e.point(j));
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error,
                "line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

int parse_int(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error,
                "line " + std::to_string(line) + ": '" + s + "' is not an integer");
  }
}

}  // namespace

std::vector<MarkedActionEntry> read_actions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, "empty action table");
  const auto header = split_csv(line);
  const auto action_col = std::find(header.begin(), header.end(), "action");
  if (action_col == header.end()) throw Error(Errc::parse_error, "missing 'action' column");
  const auto n = static_cast<int>(action_col - header.begin());
  if (n < 1 || n > kMaxDimension || static_cast<int>(header.size()) != 2 * n + 1) {
    throw Error(Errc::parse_error, "expected columns k_1..k_n, action, p_1..p_n");
  }
  std::vector<MarkedActionEntry> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != 2 * n + 1) {
      throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": wrong column count");
    }
    MarkedActionEntry e;
    e.k = IntVec(n);
    e.point = Vec(n);
    for (int j = 0; j < n; ++j) e.k(j) = parse_int(cells[static_cast<std::size_t>(j)], lineno);
    e.action = parse_double(cells[static_cast<std::size_t>(n)], lineno);
    for (int j = 0; j < n; ++j) {
      e.point(j) = parse_double(cells[static_cast<std::size_t>(n + 1 + j)], lineno);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string actions_to_json(std::span<const MarkedActionEntry> entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"k", std::vector<int>(e.k.begin(), e.k.end())},
                   {"action", e.action},
                   {"p", std::vector<double>(e.point.begin(), e.point.end())}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace ebk
