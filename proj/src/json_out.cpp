#include "doeblin/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace doeblin {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("cannot write a non-finite number as JSON");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep it a JSON float so readers do not narrow it to an integer type.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace {

void write(const ojson& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += ojson(it.key()).dump();
        out += ": ";
        write(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(j[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case ojson::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const ojson& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

ojson to_json(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(x);
  return a;
}

ojson to_json(const Channel& w) {
  ojson a = ojson::array();
  for (std::size_t i = 0; i < w.inputs(); ++i)
    a.push_back(to_json(std::vector<double>(w.row(i).begin(), w.row(i).end())));
  return a;
}

ojson to_json(const CoefficientReport& r) {
  ojson j;
  j["tau"] = r.tau;
  j["gamma"] = r.gamma;
  j["tau_max"] = r.tau_max;
  j["gamma_max"] = r.gamma_max;
  j["tau_max2"] = r.tau_max2;
  j["eta_tv"] = r.eta_tv;
  return j;
}

ojson to_json(const Coupling& c) {
  ojson j;
  j["arity"] = c.arity;
  j["alphabet"] = c.alphabet;
  ojson comps = ojson::array();
  for (const auto& comp : c.components) {
    ojson e;
    e["weight"] = comp.weight;
    e["glued"] = comp.glued;
    if (comp.glued.empty())
      e["shared_factor"] = nullptr;
    else
      e["shared_factor"] = to_json(std::vector<double>(comp.shared.probs().begin(), comp.shared.probs().end()));
    ojson f = ojson::object();
    for (const auto& [coord, p] : comp.free)
      f[std::to_string(coord)] = to_json(std::vector<double>(p.probs().begin(), p.probs().end()));
    e["free_factors"] = f;
    comps.push_back(e);
  }
  j["components"] = comps;
  if (c.expanded) j["expanded"] = to_json(*c.expanded, c.arity, c.alphabet);
  return j;
}

ojson to_json(const SparseTable& t, std::size_t n, std::size_t m) {
  ojson a = ojson::array();
  for (const auto& [key, mass] : t) {
    ojson e;
    e["tuple"] = decode_tuple(key, n, m);
    e["mass"] = mass;
    a.push_back(e);
  }
  return a;
}

}  // namespace doeblin
