#include "takagi/fields.hpp"

#include <charconv>
#include <map>
#include <numbers>
#include <sstream>

#include "takagi/ensemble.hpp"

namespace takagi {

MatrixField demo_rankloss_field() {
  return {[](double x, double y) {
            CMatrix a(1, 1);
            a(0, 0) = Complex(x, y);
            return CSym(a);
          },
          Rect{-1.0, 1.0, -1.0, 1.0}, 1};
}

MatrixField demo_coalescence_field() {
  return {[](double x, double y) {
            CMatrix a(2, 2);
            a << Complex(1.0 + x, 0.0), Complex(y, 0.0), Complex(y, 0.0), Complex(1.0 - x, 0.0);
            return CSym(a);
          },
          Rect{-1.0, 1.0, -1.0, 1.0}, 2};
}

MatrixField demo_constant_field() {
  return {[](double, double) {
            CMatrix a = CMatrix::Zero(2, 2);
            a(0, 0) = 2.0;
            a(1, 1) = 1.0;
            return CSym(a);
          },
          Rect{-1.0, 1.0, -1.0, 1.0}, 2};
}

Rect ensemble_domain() { return {0.0, 2.0 * std::numbers::pi, 0.0, std::numbers::pi}; }

namespace {

double to_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw Error("invalid number '" + s + "'");
  return v;
}

std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("expected key=value in '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

}  // namespace

FieldSpec parse_field_spec(const std::string& specIn) {
  std::string spec = specIn;
  double dx = 0.0, dy = 0.0;
  if (const auto at = spec.find('@'); at != std::string::npos) {
    const std::string shift = spec.substr(at + 1);
    spec = spec.substr(0, at);
    const auto comma = shift.find(',');
    if (comma == std::string::npos) throw Error("translation must be '@dx,dy'");
    dx = to_double(shift.substr(0, comma));
    dy = to_double(shift.substr(comma + 1));
  }

  FieldSpec out;
  if (spec == "demo-rankloss") {
    out.field = demo_rankloss_field();
    out.description = {{"type", spec}};
  } else if (spec == "demo-coalescence") {
    out.field = demo_coalescence_field();
    out.description = {{"type", spec}};
  } else if (spec == "demo-constant") {
    out.field = demo_constant_field();
    out.description = {{"type", spec}};
  } else if (spec.rfind("ensemble:", 0) == 0) {
    auto kv = parse_kv(spec.substr(9));
    if (!kv.count("n") || !kv.count("seed")) throw Error("ensemble field needs n= and seed=");
    const auto n = static_cast<Index>(std::stol(kv["n"]));
    const auto seed = std::stoull(kv["seed"]);
    const auto real = kv.count("realization") ? static_cast<std::uint32_t>(std::stoul(kv["realization"])) : 0u;
    out.field = make_field(n, seed, real).as_field(ensemble_domain());
    out.description = {{"type", "ensemble"}, {"n", n}, {"seed", seed}, {"realization", real}};
  } else {
    throw Error("unknown field '" + spec + "'");
  }
  if (dx != 0.0 || dy != 0.0) {
    const Rect d = out.field.domain;
    out.field = translate(out.field, dx, dy);
    out.field.domain = d;
    out.description["translate"] = {dx, dy};
  }
  return out;
}

}  // namespace takagi
