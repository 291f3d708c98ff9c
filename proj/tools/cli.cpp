#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "ebk/billiard.hpp"
#include "ebk/ebk.hpp"
#include "ebk/errors.hpp"
#include "ebk/legendre.hpp"
#include "ebk/profile_spec.hpp"
#include "ebk/spectrum.hpp"

namespace ebk {

namespace {

struct Config {
  std::string profile;
  std::string actions_file;
  int k_max = 100;
  int m_max = 5;
  double hbar = 1.0;
  std::string shift;
  double tol = 1e-12;
  std::string out;
  std::string format = "csv";
  std::string orientation;
  std::optional<double> degree;
  std::string report;
  // billiard
  std::optional<double> m, n;
  std::optional<int> n_max;
  double radius = 1.0;
  bool maslov = false;
  std::optional<int> m1, m2;
  // minmax
  std::string lattice_point;
  std::optional<double> energy;
  double offset = 0.5;
  int ell_max = 20;
  std::optional<int> multiple_bound;
};

Vec parse_vector(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, std::string("bad number '") + item + "' in " + what);
    }
  }
  if (values.empty() || static_cast<int>(values.size()) > kMaxDimension) {
    throw Error(Errc::invalid_argument, std::string(what) + " needs 1 to 3 components");
  }
  Vec v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

MaslovShift shift_of(const Config& c) {
  return c.shift.empty() ? MaslovShift{} : MaslovShift{parse_vector(c.shift, "--shift")};
}

std::vector<MarkedActionEntry> read_actions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_argument, "cannot read '" + path + "'");
  return read_actions_csv(in);
}

// Entries for the variational and reconstruction routes; the Ramos curve
// uses its closed form, which is much cheaper than inverting the Gauss map.
std::vector<MarkedActionEntry> unshifted_entries(const ResolvedProfile& rp, int k_max) {
  if (rp.kind == "ramos") return ramos_entries(k_max);
  return marked_action_spectrum(rp.surface, k_max);
}

Orientation route_orientation(const Config& c, const ResolvedProfile* rp) {
  if (!c.orientation.empty()) return orientation_from_string(c.orientation);
  if (rp && rp->surface.orientation() == Orientation::concave) return Orientation::concave;
  return Orientation::convex;
}

ResolvedProfile require_profile(const Config& c) {
  if (c.profile.empty()) throw Error(Errc::invalid_argument, "--profile is required");
  return resolve_profile(c.profile);
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw Error(Errc::invalid_argument, "cannot write '" + c.out + "'");
  file << text;
}

std::string spectrum_text(const Config& c, const EbkSpectrum& s) {
  if (c.format == "json") return spectrum_to_json(s);
  std::ostringstream os;
  write_spectrum_csv(os, s);
  return os.str();
}

std::string run_direct(const Config& c) {
  const ResolvedProfile rp = require_profile(c);
  return spectrum_text(c, direct_spectrum(rp.profile, c.m_max, c.hbar, shift_of(c)));
}

std::string run_variational(const Config& c) {
  std::vector<MarkedActionEntry> entries;
  std::optional<ResolvedProfile> rp;
  double degree = 1.0;
  if (!c.actions_file.empty()) {
    entries = read_actions_file(c.actions_file);
  } else {
    rp = require_profile(c);
    entries = unshifted_entries(*rp, c.k_max);
    degree = rp->profile.degree();
  }
  if (c.degree) degree = *c.degree;
  const Orientation o = route_orientation(c, rp ? &*rp : nullptr);
  return spectrum_text(c, variational_spectrum(entries, o, degree, c.m_max, c.hbar, shift_of(c)));
}

std::string run_reconstruct(const Config& c) {
  std::vector<MarkedActionEntry> entries;
  std::optional<ResolvedProfile> rp;
  double degree = 1.0;
  if (!c.actions_file.empty()) {
    entries = read_actions_file(c.actions_file);
  } else {
    rp = require_profile(c);
    entries = unshifted_entries(*rp, c.k_max);
    degree = rp->profile.degree();
  }
  if (c.degree) degree = *c.degree;
  const EbkSpectrum s = reconstruction_spectrum(entries, c.m_max, c.hbar, shift_of(c), degree);
  if (!c.report.empty()) {
    const Reconstruction r =
        reconstruct(cloud_from_actions(entries), rp ? &rp->surface : nullptr);
    std::ofstream file(c.report, std::ios::binary);
    if (!file) throw Error(Errc::invalid_argument, "cannot write '" + c.report + "'");
    file << report_to_json(r.report);
  }
  return spectrum_text(c, s);
}

std::string run_actions(const Config& c) {
  const ResolvedProfile rp = require_profile(c);
  const MaslovShift shift = shift_of(c);
  const auto entries = rp.kind == "ramos" ? ramos_entries(c.k_max, shift)
                                          : marked_action_spectrum(rp.surface, c.k_max, shift);
  if (c.format == "json") return actions_to_json(entries);
  std::ostringstream os;
  write_actions_csv(os, entries);
  return os.str();
}

std::string run_legendre_dual(const Config& c) {
  const ResolvedProfile rp = require_profile(c);
  const LevelSurface dual = hypersurface_transform(rp.surface);
  const auto samples = dual.samples();
  const Eigen::Index n = dual.dimension();
  if (c.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : samples) {
      arr.push_back({{"param", std::vector<double>(s.param.begin(), s.param.end())},
                     {"p", std::vector<double>(s.point.begin(), s.point.end())},
                     {"normal", std::vector<double>(s.normal.begin(), s.normal.end())},
                     {"curvature", s.curvature}});
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  for (Eigen::Index j = 0; j < n - 1; ++j) os << "t_" << j + 1 << ',';
  for (Eigen::Index j = 0; j < n; ++j) os << "p_" << j + 1 << ',';
  for (Eigen::Index j = 0; j < n; ++j) os << "n_" << j + 1 << ',';
  os << "curvature\n";
  for (const auto& s : samples) {
    for (Eigen::Index j = 0; j < n - 1; ++j) os << format_number(s.param(j)) << ',';
    for (Eigen::Index j = 0; j < n; ++j) os << format_number(s.point(j)) << ',';
    for (Eigen::Index j = 0; j < n; ++j) os << format_number(s.normal(j)) << ',';
    os << format_number(s.curvature) << '\n';
  }
  return os.str();
}

std::string run_billiard_solve(const Config& c) {
  std::vector<std::pair<double, double>> mn;
  if (c.m && c.n) {
    mn.emplace_back(*c.m, *c.n);
  } else if (!c.m && !c.n) {
    const int n_max = c.n_max.value_or(c.m_max);
    for (int m = 0; m <= c.m_max; ++m) {
      for (int n = 0; n <= n_max; ++n) mn.emplace_back(m, n);
    }
  } else {
    throw Error(Errc::invalid_argument, "give both --m and --n, or neither for a grid");
  }
  std::vector<BilliardLevel> levels;
  for (const auto& [m, n] : mn) {
    levels.push_back(solve_F(m, c.maslov ? n + 0.75 : n, c.tol, c.radius, c.hbar));
  }
  if (c.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : levels) {
      arr.push_back({{"m", l.m}, {"n", l.n}, {"F", l.F}, {"E", l.E}, {"residual", l.residual}});
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  write_levels_csv(os, levels);
  return os.str();
}

std::string run_crosscheck(const Config& c) {
  if (c.k_max < 10) throw Error(Errc::invalid_argument, "crosscheck needs --k-max >= 10");
  std::vector<std::pair<int, int>> pairs;
  if (c.m1 && c.m2) {
    pairs.emplace_back(*c.m1, *c.m2);
  } else if (!c.m1 && !c.m2) {
    for (int a = 0; a <= c.m_max; ++a) {
      for (int b = a; b <= c.m_max; ++b) {
        if (a || b) pairs.emplace_back(a, b);
      }
    }
  } else {
    throw Error(Errc::invalid_argument, "give both --m1 and --m2, or neither for a grid");
  }
  const auto entries = ramos_entries(c.k_max);
  const MaslovShift shift = shift_of(c);
  std::vector<CrosscheckReport> reports;
  for (const auto& [a, b] : pairs) reports.push_back(crosscheck(entries, a, b, shift, c.hbar));
  if (c.format == "json") return crosscheck_to_json(reports);
  std::ostringstream os;
  os << "m1,m2,k_max,F_route,F_ref,difference,error_estimate\n";
  for (const auto& r : reports) {
    os << r.m1 << ',' << r.m2 << ',' << r.k_max << ',' << format_number(r.F_route) << ','
       << format_number(r.F_ref) << ',' << format_number(r.difference) << ','
       << format_number(r.error_estimate) << '\n';
  }
  return os.str();
}

std::string run_minmax(const Config& c) {
  const ResolvedProfile rp = require_profile(c);
  if (c.lattice_point.empty()) throw Error(Errc::invalid_argument, "--m is required");
  const Vec mv = parse_vector(c.lattice_point, "--m");
  IntVec m(mv.size());
  for (Eigen::Index j = 0; j < mv.size(); ++j) {
    if (mv(j) != std::floor(mv(j)) || mv(j) < 0) {
      throw Error(Errc::invalid_argument, "--m needs non-negative integers");
    }
    m(j) = static_cast<int>(mv(j));
  }
  const MaslovShift shift = shift_of(c);
  const auto entries = unshifted_entries(rp, c.k_max);
  const Orientation o = route_orientation(c, &rp);
  // The certificate is stated for the 1-homogeneous profile.
  const Vec x = c.hbar * (m.cast<double>() + shift.resolved(static_cast<int>(m.size())));
  const double E = c.energy ? *c.energy : rp.profile.root().value(x) + c.offset;
  std::vector<int> ells;
  for (int l = 1; l <= c.ell_max; ++l) ells.push_back(l);
  const auto values = minmax_certificate(entries, E, m, shift, c.hbar, ells, o, c.multiple_bound);
  if (c.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : values) {
      arr.push_back({{"ell", v.ell}, {"E", E}, {"value", v.value},
                     {"k", std::vector<int>(v.k.begin(), v.k.end())}});
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "ell,E,value,k\n";
  for (const auto& v : values) {
    os << v.ell << ',' << format_number(E) << ',' << format_number(v.value) << ',';
    for (Eigen::Index j = 0; j < v.k.size(); ++j) os << (j ? ";" : "") << v.k(j);
    os << '\n';
  }
  return os.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"EBK spectra of homogeneous toric Hamiltonians", "ebk"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub, bool profile, bool k_max, bool m_max) {
    if (profile) sub->add_option("--profile", c.profile, "builtin name or JSON profile file");
    if (k_max) {
      sub->add_option("--k-max", c.k_max, "largest |k|_inf of enumerated directions")
          ->check(CLI::Range(1, 1 << 20));
    }
    if (m_max) sub->add_option("--m-max", c.m_max, "largest |m|_inf")->check(CLI::Range(0, 1 << 16));
    sub->add_option("--hbar", c.hbar, "Planck constant")->check(CLI::PositiveNumber);
    sub->add_option("--shift", c.shift, "Maslov shift mu1,...,mun");
    sub->add_option("--tol", c.tol, "root tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto route_flags = [&](CLI::App* sub) {
    sub->add_option("--actions", c.actions_file, "action table CSV instead of --profile");
    sub->add_option("--orientation", c.orientation, "convex or concave")
        ->check(CLI::IsMember({"convex", "concave"}));
    sub->add_option("--degree", c.degree, "homogeneity degree d")->check(CLI::PositiveNumber);
  };

  std::map<CLI::App*, std::function<std::string(const Config&)>> handlers;

  auto* direct = app.add_subcommand("spectrum-direct", "E_m = f(hbar (m + mu))");
  common(direct, true, false, true);
  handlers[direct] = run_direct;

  auto* variational = app.add_subcommand("spectrum-variational", "sup/inf over the action spectrum");
  common(variational, true, true, true);
  route_flags(variational);
  handlers[variational] = run_variational;

  auto* reconstruct_cmd =
      app.add_subcommand("spectrum-reconstruct", "energies from the reconstructed level set");
  common(reconstruct_cmd, true, true, true);
  route_flags(reconstruct_cmd);
  reconstruct_cmd->add_option("--report", c.report, "write a JSON reconstruction report here");
  handlers[reconstruct_cmd] = run_reconstruct;

  auto* actions = app.add_subcommand("actions", "marked action spectrum");
  common(actions, true, true, false);
  handlers[actions] = run_actions;

  auto* dual = app.add_subcommand("legendre-dual", "samples of the Legendre dual level set");
  common(dual, true, false, false);
  handlers[dual] = run_legendre_dual;

  auto* solve = app.add_subcommand("billiard-solve", "disk billiard levels F_{m,n}");
  common(solve, false, false, true);
  solve->add_option("--m", c.m, "angular quantum number")->check(CLI::NonNegativeNumber);
  solve->add_option("--n", c.n, "radial quantum number")->check(CLI::NonNegativeNumber);
  solve->add_option("--n-max", c.n_max, "grid bound for n (default: --m-max)")
      ->check(CLI::Range(0, 1 << 16));
  solve->add_option("--radius", c.radius, "disk radius")->check(CLI::PositiveNumber);
  solve->add_flag("--maslov", c.maslov, "use n + 3/4");
  handlers[solve] = run_billiard_solve;

  auto* cross = app.add_subcommand("billiard-crosscheck", "toric route against solve_F");
  common(cross, false, true, true);
  cross->add_option("--m1", c.m1, "first quantum number")->check(CLI::Range(0, 1 << 16));
  cross->add_option("--m2", c.m2, "second quantum number")->check(CLI::Range(0, 1 << 16));
  handlers[cross] = run_crosscheck;

  auto* minmax = app.add_subcommand("minmax-certify", "sign trend of the minmax characterization");
  common(minmax, true, true, false);
  minmax->add_option("--m", c.lattice_point, "lattice point m1,...,mn");
  minmax->add_option("--energy", c.energy, "trial energy (default: E_m + offset)");
  minmax->add_option("--offset", c.offset, "offset from E_m when --energy is absent");
  minmax->add_option("--ell-max", c.ell_max, "levels l = 1..ell-max")->check(CLI::Range(1, 1 << 16));
  minmax->add_option("--multiple-bound", c.multiple_bound, "largest |l k|_inf considered")
      ->check(CLI::Range(1, 1 << 30));
  minmax->add_option("--orientation", c.orientation, "convex or concave")
      ->check(CLI::IsMember({"convex", "concave"}));
  handlers[minmax] = run_minmax;

  // Crosscheck reports are JSON unless asked otherwise.
  std::vector<std::string> args(argv + 1, argv + argc);
  const bool format_given = std::find(args.begin(), args.end(), "--format") != args.end() ||
                            std::any_of(args.begin(), args.end(), [](const std::string& a) {
                              return a.rfind("--format=", 0) == 0;
                            });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    for (const auto& [sub, handler] : handlers) {
      if (!sub->parsed()) continue;
      if (sub == cross && !format_given) c.format = "json";
      emit(c, handler(c), out);
      return 0;
    }
    err << "error: no subcommand\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace ebk
