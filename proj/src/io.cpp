#include "forge/io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace forge {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("json: " + what); }

const ordered_json& field(const ordered_json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

int read_dim(const ordered_json& j) {
  const auto& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<int>() < 1) bad("'dim' must be a positive integer");
  return d.get<int>();
}

bool is_exact_value(const ordered_json& v) {
  if (v.is_number_integer()) return true;
  if (v.is_string()) return parse_rational(v.get<std::string>()).has_value();
  return false;
}

double real_value(const ordered_json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (auto q = parse_rational(s)) return q->get_d();
    try {
      std::size_t used = 0;
      double x = std::stod(s, &used);
      if (used == s.size()) return x;
    } catch (const std::exception&) {
    }
  }
  bad("expected a real number, got " + v.dump());
}

Rational rational_value(const ordered_json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string())
    if (auto q = parse_rational(v.get<std::string>())) return *q;
  bad("expected an integer or \"p/q\" in exact mode, got " + v.dump());
}

template <typename Scalar>
Scalar value_pair(const ordered_json& j) {
  const ordered_json zero = 0;
  const auto& re = j.contains("re") ? j.at("re") : zero;
  const auto& im = j.contains("im") ? j.at("im") : zero;
  if constexpr (is_exact_v<Scalar>)
    return GaussianRational(rational_value(re), rational_value(im));
  else
    return Complex(real_value(re), real_value(im));
}

void put_value(ordered_json& j, const Complex& z) {
  j["re"] = z.real();
  j["im"] = z.imag();
}

void put_value(ordered_json& j, const GaussianRational& z) {
  j["re"] = to_string(z.real());
  j["im"] = to_string(z.imag());
}

std::vector<std::string> names_of(const ordered_json& j) {
  std::vector<std::string> out;
  for (const auto& s : j) out.push_back(s.get<std::string>());
  return out;
}

template <typename Scalar>
const char* arithmetic_name() {
  return ScalarTraits<Scalar>::name;
}

template <typename Scalar>
Bundle<Scalar> bundle_from(const ordered_json& j) {
  Bundle<Scalar> b;
  b.construction = j.value("construction", std::string());
  const std::string mode = j.value("mode", std::string("discrete"));
  if (mode == "discrete")
    b.mode = Mode::Discrete;
  else if (mode == "continuous")
    b.mode = Mode::Continuous;
  else
    bad("unknown mode '" + mode + "'");
  if (j.contains("parameters")) b.parameters = j.at("parameters");
  if (j.contains("stencils"))
    for (const auto& [name, s] : j.at("stencils").items()) b.stencils.emplace(name, any_stencil_from_json<Scalar>(s));
  if (j.contains("signals"))
    for (const auto& [name, s] : j.at("signals").items()) b.signals.emplace(name, signal_from_json<Scalar>(s));
  if (j.contains("bodies"))
    for (const auto& [name, s] : j.at("bodies").items()) b.bodies.emplace(name, body_from_json(s));
  for (const auto& c : field(j, "claims")) b.claims.push_back(claim_from_json(c));
  return b;
}

}  // namespace

ordered_json scalar_to_json(const Complex& z) {
  ordered_json j;
  put_value(j, z);
  return j;
}

ordered_json scalar_to_json(const GaussianRational& z) {
  ordered_json j;
  put_value(j, z);
  return j;
}

template <typename Scalar>
Scalar scalar_from_json(const ordered_json& j) {
  if (j.is_object()) return value_pair<Scalar>(j);
  // bare numbers and "a+bi" strings are accepted as well
  if (j.is_number()) {
    if constexpr (is_exact_v<Scalar>)
      return GaussianRational(rational_value(j));
    else
      return Complex(j.get<double>(), 0.0);
  }
  if (j.is_string()) {
    const ParsedComplex c = parse_complex(j.get<std::string>());
    if constexpr (is_exact_v<Scalar>) {
      if (!c.exact) bad("non-rational value " + j.dump() + " in exact mode");
      return c.exact_value;
    } else {
      return c.value;
    }
  }
  bad("expected a complex value, got " + j.dump());
}

bool json_is_exact(const ordered_json& j) {
  if (j.is_object()) {
    for (const auto& [key, v] : j.items()) {
      if ((key == "re" || key == "im") && !v.is_object() && !v.is_array()) {
        if (!is_exact_value(v)) return false;
      } else if (!json_is_exact(v)) {
        return false;
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j)
      if (!json_is_exact(v)) return false;
  }
  return true;
}

ordered_json point_to_json(const LatticePoint& p) {
  ordered_json j = ordered_json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) j.push_back(p(i));
  return j;
}

LatticePoint point_from_json(const ordered_json& j, int dim) {
  if (j.is_number_integer() && dim == 1) return LatticePoint::Constant(1, j.get<std::int64_t>());
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    bad("expected an integer point of dimension " + std::to_string(dim) + ", got " + j.dump());
  LatticePoint p(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_number_integer()) bad("lattice coordinates must be integers, got " + j.dump());
    p(i) = j[i].get<std::int64_t>();
  }
  return p;
}

ordered_json vector_to_json(const RealVector& v) {
  ordered_json j = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

RealVector vector_from_json(const ordered_json& j, int dim) {
  if (j.is_number() && dim == 1) return RealVector::Constant(1, j.get<double>());
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    bad("expected a vector of dimension " + std::to_string(dim) + ", got " + j.dump());
  RealVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = real_value(j[i]);
  return v;
}

template <typename Scalar>
ordered_json to_json(const LatticeSignal<Scalar>& w) {
  ordered_json j;
  j["dim"] = w.dim();
  j["entries"] = ordered_json::array();
  for (const auto& [x, v] : w) {
    ordered_json e;
    e["x"] = point_to_json(x);
    put_value(e, v);
    j["entries"].push_back(std::move(e));
  }
  return j;
}

template <typename Scalar>
ordered_json to_json(const Stencil<Scalar>& s) {
  ordered_json j;
  j["dim"] = s.dim();
  j["taps"] = ordered_json::array();
  for (const auto& [y, a] : s) {
    ordered_json e;
    e["x"] = point_to_json(y);
    put_value(e, a);
    j["taps"].push_back(std::move(e));
  }
  return j;
}

template <typename Scalar>
ordered_json to_json(const ContinuousSignal<Scalar>& w) {
  ordered_json j;
  j["dim"] = w.dim();
  if (w.overlap_declared()) j["overlap"] = true;
  j["atoms"] = ordered_json::array();
  for (const auto& a : w.atoms()) {
    ordered_json e;
    e["coef"] = scalar_to_json(a.coef);
    e["center"] = vector_to_json(a.geometry.center);
    e["halfwidth"] = a.geometry.shape == AtomShape::Box ? vector_to_json(a.geometry.halfwidth) : ordered_json();
    j["atoms"].push_back(std::move(e));
  }
  return j;
}

template <typename Scalar>
ordered_json to_json(const ContinuousStencil<Scalar>& s) {
  ordered_json j;
  j["dim"] = s.dim();
  j["offsets"] = ordered_json::array();
  for (const auto& [y, a] : s.taps()) j["offsets"].push_back({{"y", vector_to_json(y)}, {"coef", scalar_to_json(a)}});
  return j;
}

ordered_json to_json(const ConvexBody& b) {
  ordered_json j;
  j["dim"] = b.dim();
  j["vertices"] = ordered_json::array();
  for (Eigen::Index c = 0; c < b.vertices().cols(); ++c) j["vertices"].push_back(vector_to_json(b.vertices().col(c)));
  j["radius"] = b.radius();
  return j;
}

ordered_json to_json(const Claim& c) {
  ordered_json j;
  j["name"] = c.name;
  j["kind"] = c.kind;
  j["args"] = c.args;
  j["expected"] = c.expected;
  j["verifier"] = c.verifier;
  j["params"] = c.params;
  return j;
}

template <typename Scalar>
LatticeSignal<Scalar> lattice_signal_from_json(const ordered_json& j) {
  const int d = read_dim(j);
  LatticeSignal<Scalar> w(d);
  for (const auto& e : field(j, "entries")) {
    const LatticePoint x = point_from_json(field(e, "x"), d);
    if (w.contains(x)) bad("duplicate entry at " + field(e, "x").dump());
    w.set(x, value_pair<Scalar>(e));
  }
  return w;
}

template <typename Scalar>
Stencil<Scalar> stencil_from_json(const ordered_json& j) {
  const int d = read_dim(j);
  Stencil<Scalar> s(d);
  for (const auto& e : field(j, "taps")) s.add_tap(point_from_json(field(e, "x"), d), value_pair<Scalar>(e));
  return s;
}

template <typename Scalar>
ContinuousSignal<Scalar> continuous_signal_from_json(const ordered_json& j) {
  const int d = read_dim(j);
  ContinuousSignal<Scalar> w(d);
  for (const auto& e : field(j, "atoms")) {
    const RealVector c = vector_from_json(field(e, "center"), d);
    const Scalar coef = scalar_from_json<Scalar>(field(e, "coef"));
    if (!e.contains("halfwidth") || e.at("halfwidth").is_null()) {
      w.add(AtomGeometry::dirac(c), coef);
    } else {
      const RealVector h = vector_from_json(e.at("halfwidth"), d);
      if ((h.array() <= 0).any()) bad("box halfwidths must be positive");
      w.add(AtomGeometry::box(c, h), coef);
    }
  }
  w.declare_overlap(j.value("overlap", false));
  w.validate();
  return w;
}

template <typename Scalar>
ContinuousStencil<Scalar> continuous_stencil_from_json(const ordered_json& j) {
  const int d = read_dim(j);
  ContinuousStencil<Scalar> s(d);
  for (const auto& e : field(j, "offsets"))
    s.add_tap(vector_from_json(field(e, "y"), d), scalar_from_json<Scalar>(field(e, "coef")));
  return s;
}

ConvexBody body_from_json(const ordered_json& j) {
  const int d = read_dim(j);
  const auto& verts = field(j, "vertices");
  if (!verts.is_array() || verts.empty()) bad("a body needs at least one vertex");
  Eigen::MatrixXd m(d, verts.size());
  for (std::size_t c = 0; c < verts.size(); ++c) m.col(c) = vector_from_json(verts[c], d);
  const double r = j.contains("radius") ? real_value(j.at("radius")) : 0.0;
  if (r < 0) bad("radius must be nonnegative");
  return ConvexBody(m, r);
}

Claim claim_from_json(const ordered_json& j) {
  Claim c;
  c.name = field(j, "name").get<std::string>();
  c.kind = field(j, "kind").get<std::string>();
  c.args = names_of(field(j, "args"));
  c.expected = j.value("expected", true);
  c.verifier = j.value("verifier", std::string());
  if (j.contains("params")) c.params = j.at("params");
  return c;
}

template <typename Scalar>
AnySignal<Scalar> signal_from_json(const ordered_json& j) {
  if (j.contains("entries")) return lattice_signal_from_json<Scalar>(j);
  if (j.contains("atoms")) return continuous_signal_from_json<Scalar>(j);
  bad("signal needs 'entries' or 'atoms'");
}

template <typename Scalar>
AnyStencil<Scalar> any_stencil_from_json(const ordered_json& j) {
  if (j.contains("taps")) return stencil_from_json<Scalar>(j);
  if (j.contains("offsets")) return continuous_stencil_from_json<Scalar>(j);
  bad("stencil needs 'taps' or 'offsets'");
}

template <typename Scalar>
ordered_json to_json(const Bundle<Scalar>& b) {
  ordered_json j;
  j["construction"] = b.construction;
  j["mode"] = to_string(b.mode);
  j["arithmetic"] = arithmetic_name<Scalar>();
  j["parameters"] = b.parameters;
  if (b.stencils.count("A") && b.signals.count("psi") && b.signals.count("f") && b.signals.count("g"))
    j["pair"] = {{"stencil", "A"}, {"psi", "psi"}, {"f", "f"}, {"g", "g"}};
  if (b.signals.count("w0") && b.bodies.count("D0"))
    j["triple"] = {{"w0", "w0"}, {"w1", "w1"}, {"w2", "w2"}, {"D0", "D0"}, {"D", "D"}};
  j["stencils"] = ordered_json::object();
  for (const auto& [name, s] : b.stencils) j["stencils"][name] = std::visit([](const auto& x) { return to_json(x); }, s);
  j["signals"] = ordered_json::object();
  for (const auto& [name, s] : b.signals) j["signals"][name] = std::visit([](const auto& x) { return to_json(x); }, s);
  j["bodies"] = ordered_json::object();
  for (const auto& [name, body] : b.bodies) j["bodies"][name] = to_json(body);
  j["claims"] = ordered_json::array();
  for (const auto& c : b.claims) j["claims"].push_back(to_json(c));
  return j;
}

AnyBundle bundle_from_json(const ordered_json& j) {
  if (!j.is_object()) bad("bundle must be an object");
  bool exact;
  if (j.contains("arithmetic")) {
    const std::string a = j.at("arithmetic").get<std::string>();
    if (a != "exact" && a != "float") bad("arithmetic must be 'exact' or 'float'");
    exact = a == "exact";
  } else {
    exact = json_is_exact(j.value("signals", ordered_json::object())) &&
            json_is_exact(j.value("stencils", ordered_json::object()));
  }
  if (exact) return bundle_from<GaussianRational>(j);
  return bundle_from<Complex>(j);
}

ordered_json read_json_source(const std::string& source) {
  std::string text;
  if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else if (!source.empty() && source.front() == '{') {
    text = source;
  } else {
    std::ifstream in(source);
    if (!in) bad("cannot open '" + source + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("parse error: ") + e.what());
  }
}

#define FORGE_INSTANTIATE(S)                                                        \
  template S scalar_from_json<S>(const ordered_json&);                              \
  template ordered_json to_json(const LatticeSignal<S>&);                           \
  template ordered_json to_json(const Stencil<S>&);                                 \
  template ordered_json to_json(const ContinuousSignal<S>&);                        \
  template ordered_json to_json(const ContinuousStencil<S>&);                       \
  template ordered_json to_json(const Bundle<S>&);                                  \
  template LatticeSignal<S> lattice_signal_from_json<S>(const ordered_json&);       \
  template Stencil<S> stencil_from_json<S>(const ordered_json&);                    \
  template ContinuousSignal<S> continuous_signal_from_json<S>(const ordered_json&); \
  template ContinuousStencil<S> continuous_stencil_from_json<S>(const ordered_json&); \
  template AnySignal<S> signal_from_json<S>(const ordered_json&);                   \
  template AnyStencil<S> any_stencil_from_json<S>(const ordered_json&);

FORGE_INSTANTIATE(Complex)
FORGE_INSTANTIATE(GaussianRational)

#undef FORGE_INSTANTIATE

}  // namespace forge
