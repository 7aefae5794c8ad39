#include "forge/gaussian_rational.hpp"

#include <cctype>
#include <stdexcept>

namespace forge {

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  Rational den = norm(o);
  if (sgn(den) == 0) throw std::domain_error("GaussianRational: division by zero");
  Rational re = (re_ * o.re_ + im_ * o.im_) / den;
  Rational im = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const GaussianRational& z) {
  if (sgn(z.imag()) == 0) return to_string(z.real());
  std::string out;
  if (sgn(z.real()) != 0) out = to_string(z.real());
  std::string im = to_string(z.imag());
  if (!out.empty() && im.front() != '-') out += '+';
  return out + im + "i";
}

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') ++i;
  std::size_t digits = 0, slash = std::string_view::npos;
  for (std::size_t k = i; k < text.size(); ++k) {
    if (std::isdigit(static_cast<unsigned char>(text[k]))) {
      ++digits;
    } else if (text[k] == '/' && slash == std::string_view::npos && digits > 0) {
      slash = k;
    } else {
      return std::nullopt;
    }
  }
  if (digits == 0 || (slash != std::string_view::npos && slash + 1 == text.size())) return std::nullopt;
  std::string s(text[0] == '+' ? text.substr(1) : text);
  Rational q;
  if (q.set_str(s, 10) != 0) return std::nullopt;
  if (slash != std::string_view::npos && sgn(q.get_den()) == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

namespace {

struct ParsedReal {
  bool exact;
  Rational q;
  double value;
};

ParsedReal parse_real_part(std::string_view text, std::string_view whole) {
  if (auto q = parse_rational(text)) return {true, *q, q->get_d()};
  std::string s(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  }
  if (used != s.size()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  return {false, Rational(0), v};
}

}  // namespace

ParsedComplex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty number");

  std::string re_text, im_text;
  if (s.back() == 'i' || s.back() == 'j') {
    s.pop_back();
    // split at the last sign that is not leading and not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) {
      im_text = s;
    } else {
      re_text = s.substr(0, split);
      im_text = s.substr(split);
    }
    if (im_text.empty() || im_text == "+") im_text = "1";
    if (im_text == "-") im_text = "-1";
  } else {
    re_text = s;
  }

  ParsedReal re = re_text.empty() ? ParsedReal{true, Rational(0), 0.0} : parse_real_part(re_text, text);
  ParsedReal im = im_text.empty() ? ParsedReal{true, Rational(0), 0.0} : parse_real_part(im_text, text);
  ParsedComplex out;
  out.exact = re.exact && im.exact;
  out.value = {re.value, im.value};
  if (out.exact) out.exact_value = GaussianRational(re.q, im.q);
  return out;
}

}  // namespace forge
