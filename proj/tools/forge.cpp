#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "forge/campaign.hpp"
#include "forge/constructions.hpp"
#include "forge/io.hpp"
#include "forge/solver.hpp"
#include "forge/verification.hpp"

using namespace forge;

namespace {

constexpr int kPass = 0;
constexpr int kClaimFailed = 1;
constexpr int kInvalid = 2;

struct Options {
  bool force_float = false;
  bool force_exact = false;
  bool continuous = false;
  bool discrete = false;
  std::string out = "-";
  std::uint64_t seed = 0;
  bool timing = false;
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write '" + path + "'");
  f << text;
}

void emit(const ordered_json& j, const std::string& path) { write_text(path, j.dump(2) + "\n"); }

void diagnose(const ordered_json& j) { std::cerr << j.dump() << std::endl; }

bool decide_exact(const Options& o, std::initializer_list<const ParsedComplex*> values) {
  bool all = true;
  for (const auto* v : values) all = all && v->exact;
  if (o.force_float) return false;
  if (o.force_exact && !all) throw std::invalid_argument("--exact needs integer or rational inputs");
  return all;
}

template <typename S>
S pick(const ParsedComplex& c) {
  if constexpr (is_exact_v<S>)
    return c.exact_value;
  else
    return c.value;
}

double parse_real(const std::string& s) {
  if (auto q = parse_rational(s)) return q->get_d();
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("not a real number: '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

RealVector parse_vector(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.empty()) throw std::invalid_argument("empty vector");
  RealVector v(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) v(i) = parse_real(parts[i]);
  return v;
}

ordered_json value_fields(ordered_json e, const ParsedComplex& c) {
  if (c.exact) {
    e["re"] = to_string(c.exact_value.real());
    e["im"] = to_string(c.exact_value.imag());
  } else {
    e["re"] = c.value.real();
    e["im"] = c.value.imag();
  }
  return e;
}

/// "x1,x2=value" items into a lattice signal or stencil document.
ordered_json points_document(const std::vector<std::string>& items, const char* key) {
  ordered_json j;
  j[key] = ordered_json::array();
  int dim = 0;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected 'point=value', got '" + item + "'");
    const auto coords = split(item.substr(0, eq), ',');
    if (dim == 0) dim = static_cast<int>(coords.size());
    if (static_cast<int>(coords.size()) != dim) throw std::invalid_argument("mixed dimensions in '" + item + "'");
    ordered_json x = ordered_json::array();
    for (const auto& c : coords) x.push_back(std::stoll(c));
    j[key].push_back(value_fields(ordered_json{{"x", x}}, parse_complex(item.substr(eq + 1))));
  }
  j["dim"] = dim;
  return j;
}

ordered_json body_document(const std::string& text) {
  const auto colon = text.find(':');
  if (text != "-" && text.front() != '{' && colon != std::string::npos && !std::ifstream(text))
    return to_json(ConvexBody::interval(parse_real(text.substr(0, colon)), parse_real(text.substr(colon + 1))));
  return read_json_source(text);
}

/// Signal or stencil from a JSON source or from --point/--tap items.
ordered_json signal_document(const std::string& source, const std::vector<std::string>& items, const char* key,
                             const std::string& fallback) {
  if (!source.empty()) return read_json_source(source);
  if (!items.empty()) return points_document(items, key);
  return read_json_source(fallback);
}

bool decide_exact_json(const Options& o, std::initializer_list<const ordered_json*> docs) {
  bool all = true;
  for (const auto* d : docs) all = all && json_is_exact(*d);
  if (o.force_float) return false;
  if (o.force_exact && !all) throw std::invalid_argument("--exact needs integer or rational inputs");
  return all;
}

template <typename F>
void with_scalar(bool exact, F&& f) {
  if (exact)
    f.template operator()<GaussianRational>();
  else
    f.template operator()<Complex>();
}

Mode mode_of(const Options& o) {
  if (o.continuous && o.discrete) throw std::invalid_argument("--discrete and --continuous are exclusive");
  return o.continuous ? Mode::Continuous : Mode::Discrete;
}

template <typename S>
void run_pair(bool pauli, const ordered_json& stencil_doc, const ordered_json& psi_doc, const std::string& out) {
  const auto A = any_stencil_from_json<S>(stencil_doc);
  const auto psi = signal_from_json<S>(psi_doc);
  std::visit(
      [&](const auto& op, const auto& w) {
        using Op = std::decay_t<decltype(op)>;
        using Sig = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<Op, Stencil<S>> == std::is_same_v<Sig, LatticeSignal<S>>) {
          emit(to_json(pauli ? theorem2_pauli_pair(op, w) : theorem1_pair(op, w)), out);
        } else {
          throw std::invalid_argument("stencil and psi must both be lattice or both continuous");
        }
      },
      A, psi);
}

template <typename S>
LatticeSignal<Complex> as_complex_lattice(const AnySignal<S>& any) {
  LatticeSignal<S> w = std::visit(
      [](const auto& s) -> LatticeSignal<S> {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, LatticeSignal<S>>)
          return s;
        else
          return lattice_reduce(s);
      },
      any);
  LatticeSignal<Complex> out(w.dim());
  for (const auto& [x, v] : w) out.set(x, to_complex(v));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: finite-difference phase-retrieval ambiguities, built and verified"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool modes) {
    sub->add_flag("--float", o.force_float, "floating-point arithmetic");
    sub->add_flag("--exact", o.force_exact, "exact Gaussian-rational arithmetic (default when inputs allow)");
    sub->add_option("-o,--out", o.out, "output path, - for stdout");
    if (modes) {
      sub->add_flag("--discrete", o.discrete, "lattice signals (default)");
      sub->add_flag("--continuous", o.continuous, "box-atom signals on R^d");
    }
  };

  // example1
  std::string a1 = "1", a2 = "2", b1 = "1", b2 = "3", y1 = "1", z1 = "2";
  std::optional<double> r1;
  auto* ex1 = app.add_subcommand("example1", "two-tap stencil with the two-bump psi");
  ex1->add_option("--a1", a1);
  ex1->add_option("--a2", a2);
  ex1->add_option("--b1", b1);
  ex1->add_option("--b2", b2);
  ex1->add_option("--y", y1, "tap offset, comma separated");
  ex1->add_option("--z", z1, "second bump center, comma separated");
  ex1->add_option("--r", r1, "bump radius (default 1 discrete, 0.25 continuous)");
  common(ex1, true);

  // example2
  std::string e2a1 = "i", e2a2 = "1", e2phase = "1", e2y = "2", e2center = "0.5", e2psi;
  std::string e2b1 = "1", e2b2 = "3";
  std::optional<std::string> e2z;
  std::optional<double> e2r;
  double e2rho = 0.75;
  std::vector<std::string> e2points;
  auto* ex2 = app.add_subcommand("example2", "three-tap symmetric stencil and its background split");
  ex2->add_option("--a1", e2a1);
  ex2->add_option("--a2", e2a2, "real");
  ex2->add_option("--phase", e2phase, "e^{i phi}, a unit complex number");
  ex2->add_option("--y", e2y);
  ex2->add_option("--rho", e2rho);
  ex2->add_option("--center", e2center, "center a of the ball holding supp psi");
  ex2->add_option("--psi", e2psi, "lattice signal JSON (file, - or inline)");
  ex2->add_option("--point", e2points, "psi entry 'x=value' (repeatable)");
  ex2->add_option("--b1", e2b1, "two-bump psi coefficient");
  ex2->add_option("--b2", e2b2, "two-bump psi coefficient");
  ex2->add_option("--z", e2z, "two-bump psi offset (default 2a)");
  ex2->add_option("--r", e2r, "two-bump psi radius (default rho - |z|/2)");
  common(ex2, true);

  // thm1 / thm2
  std::string stencil_src, psi_src;
  std::vector<std::string> taps, points;
  auto pair_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--stencil", stencil_src, "stencil JSON (file, - or inline)");
    sub->add_option("--psi", psi_src, "signal JSON (file, - or inline)");
    sub->add_option("--tap", taps, "stencil tap 'y=a' (repeatable)");
    sub->add_option("--point", points, "psi entry 'x=value' (repeatable)");
    common(sub, false);
    return sub;
  };
  auto* thm1 = pair_cmd("thm1", "f = A psi, g = A* psi with equal Fourier magnitude");
  auto* thm2 = pair_cmd("thm2", "symmetric-tap pair with |f| = |g| as well");

  // thm3
  std::string t3psi, t3phi, t3U0 = "4.5:5.5", t3U1 = "-1.5:1.5";
  std::vector<std::string> t3psi_points, t3phi_points;
  auto* thm3 = app.add_subcommand("thm3", "associated background triple");
  thm3->add_option("--psi", t3psi);
  thm3->add_option("--phi", t3phi);
  thm3->add_option("--psi-point", t3psi_points, "psi entry 'x=value' (repeatable)");
  thm3->add_option("--phi-point", t3phi_points, "phi entry 'x=value' (repeatable)");
  thm3->add_option("--U0", t3U0, "body JSON or interval lo:hi");
  thm3->add_option("--U1", t3U1, "body JSON or interval lo:hi");
  common(thm3, false);

  // thm4
  std::string t4B, t4ystar = "2";
  std::optional<std::string> t4phase;
  bool drop_sigma = false;
  auto* thm4 = app.add_subcommand("thm4", "background triple from a separated tap");
  thm4->add_option("--stencil", stencil_src);
  thm4->add_option("--psi", psi_src);
  thm4->add_option("--tap", taps, "stencil tap 'y=a' (repeatable)");
  thm4->add_option("--point", points, "psi entry 'x=value' (repeatable)");
  thm4->add_option("--B", t4B, "body JSON or interval lo:hi holding supp psi");
  thm4->add_option("--y-star", t4ystar, "the separated tap");
  thm4->add_option("--phase", t4phase, "e^{i phi}; derived from the taps when omitted");
  thm4->add_flag("--drop-sigma", drop_sigma, "do not assume the sigma condition; emit the reduced claims");
  common(thm4, false);

  // verify
  std::string bundle_src = "-";
  auto* verify = app.add_subcommand("verify", "decide every claim of a bundle");
  verify->add_option("bundle", bundle_src, "bundle JSON file or -")->required();
  verify->add_flag("--timing", o.timing, "include wall-clock seconds");
  verify->add_option("-o,--out", o.out);

  // campaign
  CampaignConfig cc;
  std::string dims = "1,2,3", csv;
  auto* campaign = app.add_subcommand("campaign", "randomized exact property campaign");
  campaign->add_option("--thm1", cc.theorem1, "valid first-theorem instances");
  campaign->add_option("--thm2", cc.theorem2, "valid symmetric-tap instances");
  campaign->add_option("--controls", cc.controls, "instances per perturbation class");
  campaign->add_option("--dims", dims, "comma separated subset of 1,2,3");
  campaign->add_option("--grid-points", cc.grid_points, "samples for the exact/sampled agreement check");
  campaign->add_option("--seed", o.seed);
  campaign->add_option("--csv", csv, "per-instance CSV output");
  campaign->add_flag("--timing", o.timing);
  campaign->add_option("-o,--out", o.out);

  // solve
  SolverConfig sc;
  std::optional<int> solve_grid;
  bool force_complex = false;
  auto* solve = app.add_subcommand("solve", "alternating projections from the bundle's magnitudes");
  solve->add_option("bundle", bundle_src, "bundle JSON file or -")->required();
  solve->add_option("--restarts", sc.restarts);
  solve->add_option("--iterations", sc.iterations);
  solve->add_option("--grid", solve_grid, "grid points per axis (power of two)");
  solve->add_option("--seed", o.seed);
  solve->add_flag("--complex", force_complex, "drop the realness constraint for real data");
  solve->add_option("-o,--out", o.out);

  // spectrum
  std::string signal_src;
  int spectrum_grid = 512;
  auto* spectrum = app.add_subcommand("spectrum", "CSV of |w_hat| along axis slices");
  spectrum->add_option("signal", signal_src, "signal JSON file or -")->required();
  spectrum->add_option("--grid", spectrum_grid, "samples per axis (>= 2)");
  spectrum->add_option("-o,--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    diagnose({{"error", "invalid_input"}, {"message", e.what()}});
    return kInvalid;
  }

  if (const char* env = std::getenv("FORGE_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      diagnose({{"error", "invalid_input"}, {"message", std::string("FORGE_SEED is not an integer: ") + env}});
      return kInvalid;
    }
  }

  try {
    if (ex1->parsed()) {
      const auto pa1 = parse_complex(a1), pa2 = parse_complex(a2), pb1 = parse_complex(b1), pb2 = parse_complex(b2);
      const Mode mode = mode_of(o);
      const double r = r1.value_or(mode == Mode::Continuous ? 0.25 : 1.0);
      with_scalar(decide_exact(o, {&pa1, &pa2, &pb1, &pb2}), [&]<typename S>() {
        Example1Params<S> p{pick<S>(pa1), pick<S>(pa2), pick<S>(pb1), pick<S>(pb2), parse_vector(y1),
                            parse_vector(z1), r, mode};
        emit(to_json(example1(p)), o.out);
      });
      return kPass;
    }

    if (ex2->parsed()) {
      const auto pa1 = parse_complex(e2a1), pa2 = parse_complex(e2a2), ph = parse_complex(e2phase);
      const auto pb1 = parse_complex(e2b1), pb2 = parse_complex(e2b2);
      const Mode mode = mode_of(o);
      std::optional<ordered_json> psi_doc;
      if (!e2psi.empty()) psi_doc = read_json_source(e2psi);
      if (!e2points.empty()) psi_doc = points_document(e2points, "entries");
      bool exact = decide_exact(o, {&pa1, &pa2, &ph, &pb1, &pb2});
      if (psi_doc) exact = exact && decide_exact_json(o, {&*psi_doc});
      with_scalar(exact, [&]<typename S>() {
        Example2Params<S> p;
        p.a1 = pick<S>(pa1);
        p.a2 = pick<S>(pa2);
        p.phase = pick<S>(ph);
        p.y = parse_vector(e2y);
        p.rho = e2rho;
        p.center = parse_vector(e2center);
        p.mode = mode;
        if (psi_doc) {
          p.psi = lattice_signal_from_json<S>(*psi_doc);
        } else if (mode == Mode::Discrete && !e2z && !e2r) {
          LatticeSignal<S> psi(static_cast<int>(p.y.size()));
          psi.set(LatticePoint::Zero(p.y.size()), pick<S>(pb1));
          LatticePoint e1 = LatticePoint::Zero(p.y.size());
          e1(0) = 1;
          psi.set(e1, pick<S>(pb2));
          p.psi = psi;
        } else {
          const RealVector z = e2z ? parse_vector(*e2z) : RealVector(2 * p.center);
          p.two_bump = TwoBumpPsi<S>{pick<S>(pb1), pick<S>(pb2), z, e2r.value_or(p.rho - z.norm() / 2)};
        }
        emit(to_json(example2(p)), o.out);
      });
      return kPass;
    }

    if (thm1->parsed() || thm2->parsed()) {
      const auto sdoc = signal_document(stencil_src, taps, "taps", "");
      const auto pdoc = signal_document(psi_src, points, "entries", "");
      with_scalar(decide_exact_json(o, {&sdoc, &pdoc}),
                  [&]<typename S>() { run_pair<S>(thm2->parsed(), sdoc, pdoc, o.out); });
      return kPass;
    }

    if (thm3->parsed()) {
      if (t3psi.empty() && t3psi_points.empty()) t3psi_points = {"5=1"};
      if (t3phi.empty() && t3phi_points.empty()) t3phi_points = {"-1=1", "1=2"};
      const auto psi = signal_document(t3psi, t3psi_points, "entries", "");
      const auto phi = signal_document(t3phi, t3phi_points, "entries", "");
      const ConvexBody U0 = body_from_json(body_document(t3U0)), U1 = body_from_json(body_document(t3U1));
      with_scalar(decide_exact_json(o, {&psi, &phi}), [&]<typename S>() {
        emit(to_json(theorem3_background(lattice_signal_from_json<S>(psi), lattice_signal_from_json<S>(phi), U0, U1)),
             o.out);
      });
      return kPass;
    }

    if (thm4->parsed()) {
      if (stencil_src.empty() && taps.empty()) taps = {"0=i", "2=1", "-2=1"};
      if (psi_src.empty() && points.empty()) points = {"0=1", "1=3"};
      const auto sdoc = signal_document(stencil_src, taps, "taps", "");
      const auto pdoc = signal_document(psi_src, points, "entries", "");
      std::optional<ParsedComplex> phase;
      if (t4phase) phase = parse_complex(*t4phase);
      bool exact = decide_exact_json(o, {&sdoc, &pdoc});
      if (phase) exact = exact && decide_exact(o, {&*phase});
      with_scalar(exact, [&]<typename S>() {
        const auto A = stencil_from_json<S>(sdoc);
        const ConvexBody B =
            t4B.empty() ? ConvexBody::ball(RealVector::Constant(A.dim(), 0.5), 0.75) : body_from_json(body_document(t4B));
        const RealVector ys = parse_vector(t4ystar);
        LatticePoint y_star(ys.size());
        for (Eigen::Index i = 0; i < ys.size(); ++i) {
          if (ys(i) != std::round(ys(i))) throw std::invalid_argument("--y-star must be an integer point");
          y_star(i) = static_cast<std::int64_t>(ys(i));
        }
        std::optional<S> u;
        if (phase) u = pick<S>(*phase);
        emit(to_json(theorem4_background(A, lattice_signal_from_json<S>(pdoc), B, y_star, u,
                                         drop_sigma ? SigmaCondition::Drop : SigmaCondition::Require)),
             o.out);
      });
      return kPass;
    }

    if (verify->parsed()) {
      const auto bundle = bundle_from_json(read_json_source(bundle_src));
      const auto report = run_claims(bundle);
      emit(to_json(report, o.timing), o.out);
      return report.pass ? kPass : kClaimFailed;
    }

    if (campaign->parsed()) {
      cc.seed = o.seed;
      cc.dims.clear();
      for (const auto& d : split(dims, ',')) cc.dims.push_back(std::stoi(d));
      if (cc.theorem1 < 0 || cc.theorem2 < 0 || cc.controls < 0) throw std::invalid_argument("counts must be >= 0");
      const auto summary = run_campaign(cc);
      if (!csv.empty()) {
        std::ostringstream s;
        write_csv(s, summary);
        write_text(csv, s.str());
      }
      emit(to_json(summary, o.timing), o.out);
      return summary.pass() ? kPass : kClaimFailed;
    }

    if (solve->parsed()) {
      const auto bundle = bundle_from_json(read_json_source(bundle_src));
      const auto [f, g] = std::visit(
          [](const auto& b) {
            return std::pair{as_complex_lattice(b.signals.at("f")), as_complex_lattice(b.signals.at("g"))};
          },
          bundle);
      const int d = f.dim();
      sc.support_width = Eigen::VectorXi::Ones(d);
      bool real = true;
      for (const auto* w : {&f, &g}) {
        if (w->empty()) continue;
        for (int j = 0; j < d; ++j) {
          std::int64_t lo = INT64_MAX, hi = INT64_MIN;
          for (const auto& [x, v] : *w) {
            lo = std::min(lo, x(j));
            hi = std::max(hi, x(j));
          }
          sc.support_width(j) = std::max<int>(sc.support_width(j), static_cast<int>(hi - lo + 1));
        }
        for (const auto& [x, v] : *w) real = real && v.imag() == 0.0;
      }
      sc.real_signal = real && !force_complex;
      sc.grid = solve_grid;
      sc.seed = o.seed;
      const auto result = solver_demo(autocorrelation(f), sc, f, g);
      auto j = to_json(result);
      j["real_constraint"] = sc.real_signal;
      emit(j, o.out);
      return result.converged > 0 && result.unresolved == 0 ? kPass : kClaimFailed;
    }

    if (spectrum->parsed()) {
      if (spectrum_grid < 2) throw std::invalid_argument("--grid must be at least 2");
      const auto w = signal_from_json<Complex>(read_json_source(signal_src));
      std::ostringstream csv_out;
      csv_out << "axis,p,magnitude\n";
      csv_out.precision(17);
      std::visit(
          [&](const auto& s) {
            double span = std::numbers::pi;
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ContinuousSignal<Complex>>) span = sampling_span(s, s);
            for (int axis = 0; axis < s.dim(); ++axis)
              for (int k = 0; k < spectrum_grid; ++k) {
                RealVector p = RealVector::Zero(s.dim());
                p(axis) = -span + 2 * span * k / (spectrum_grid - 1);
                Complex v;
                if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ContinuousSignal<Complex>>)
                  v = ft_eval(s, p);
                else
                  v = dft_eval(s, p);
                csv_out << axis << ',' << p(axis) << ',' << std::abs(v) << '\n';
              }
          },
          w);
      write_text(o.out, csv_out.str());
      return kPass;
    }
  } catch (const PreconditionError& e) {
    diagnose({{"error", "precondition"},
              {"condition", e.condition()},
              {"statement", e.statement()},
              {"message", e.what()}});
    return kInvalid;
  } catch (const std::exception& e) {
    diagnose({{"error", "invalid_input"}, {"message", e.what()}});
    return kInvalid;
  }
  return kInvalid;
}
