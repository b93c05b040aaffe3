#include "cusp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cusp/errors.hpp"

namespace cusp {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

const json& array(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array()) throw ConfigError(where + ": '" + key + "' must be an array");
  return v;
}

}  // namespace

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  reject_unknown_keys(j, {"re", "im"}, "complex");
  return {number(j, "re", "complex"), j.contains("im") ? number(j, "im", "complex") : 0.0};
}

json to_json(const ZeroList& z) {
  json arr = json::array();
  for (const auto& e : z.entries) {
    arr.push_back({{"re", e.location.real()}, {"im", e.location.imag()}, {"mult", e.multiplicity},
                   {"boundary", e.on_boundary}});
  }
  return json{{"zeros", arr}};
}

ZeroList zero_list_from_json(const json& j) {
  reject_unknown_keys(j, {"zeros"}, "ZeroList");
  ZeroList out;
  for (const auto& e : array(j, "zeros", "ZeroList")) {
    reject_unknown_keys(e, {"re", "im", "mult", "boundary"}, "ZeroList entry");
    ZeroEntry z;
    z.location = {number(e, "re", "ZeroList entry"), number(e, "im", "ZeroList entry")};
    z.multiplicity = e.contains("mult") ? integer(e, "mult", "ZeroList entry") : 1;
    z.on_boundary = e.contains("boundary") ? e.at("boundary").get<bool>() : false;
    if (z.multiplicity < 1) throw ConfigError("ZeroList entry: mult must be >= 1");
    out.entries.push_back(z);
  }
  return out;
}

json to_json(const ExponentialDirichletSeries& L) {
  json terms = json::array();
  for (const auto& t : L.terms) terms.push_back({{"a", to_json(t.a)}, {"ell", t.ell}});
  json j{{"kind", "exponential"}, {"terms", terms}, {"truncated", L.truncated}};
  if (L.abscissa) j["abscissa"] = *L.abscissa;
  return j;
}

ExponentialDirichletSeries exponential_series_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "terms", "truncated", "abscissa"}, "ExponentialDirichletSeries");
  ExponentialDirichletSeries L;
  for (const auto& t : array(j, "terms", "ExponentialDirichletSeries")) {
    reject_unknown_keys(t, {"a", "ell"}, "series term");
    L.terms.push_back({complex_from_json(field(t, "a", "series term")), number(t, "ell", "series term")});
  }
  L.truncated = j.value("truncated", false);
  if (j.contains("abscissa")) L.abscissa = number(j, "abscissa", "ExponentialDirichletSeries");
  try {
    L.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return L;
}

json to_json(const ClassicalDirichletSeries& L) {
  json terms = json::array();
  for (const auto& t : L.terms) terms.push_back({{"c", t.c}, {"lambda", t.lambda}});
  json j{{"kind", "classical"}, {"terms", terms}, {"truncated", L.truncated}};
  if (L.abscissa) j["abscissa"] = *L.abscissa;
  return j;
}

ClassicalDirichletSeries classical_series_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "terms", "truncated", "abscissa"}, "ClassicalDirichletSeries");
  ClassicalDirichletSeries L;
  for (const auto& t : array(j, "terms", "ClassicalDirichletSeries")) {
    reject_unknown_keys(t, {"c", "lambda"}, "series term");
    L.terms.push_back({number(t, "c", "series term"), number(t, "lambda", "series term")});
  }
  L.truncated = j.value("truncated", false);
  if (j.contains("abscissa")) L.abscissa = number(j, "abscissa", "ClassicalDirichletSeries");
  try {
    L.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return L;
}

json to_json(const Lattice& L) {
  json cols = json::array();
  for (int c = 0; c < L.basis.cols(); ++c) {
    json v = json::array();
    for (int r = 0; r < L.basis.rows(); ++r) v.push_back(L.basis(r, c));
    cols.push_back(v);
  }
  return json{{"d", L.d}, {"basis", cols}};
}

Lattice lattice_from_json(const json& j) {
  reject_unknown_keys(j, {"d", "basis"}, "Lattice");
  Lattice L;
  L.d = integer(j, "d", "Lattice");
  if (L.d < 1 || L.d > 3) throw ConfigError("Lattice: d must be 1, 2 or 3");
  const json& cols = array(j, "basis", "Lattice");
  if (static_cast<int>(cols.size()) != L.d) throw ConfigError("Lattice: basis needs d column vectors");
  L.basis.resize(L.d, L.d);
  for (int c = 0; c < L.d; ++c) {
    if (!cols[c].is_array() || static_cast<int>(cols[c].size()) != L.d) {
      throw ConfigError("Lattice: each basis vector needs d entries");
    }
    for (int r = 0; r < L.d; ++r) L.basis(r, c) = cols[c][r].get<double>();
  }
  try {
    L.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return L;
}

json to_json(const ResonanceSet& r) {
  json arr = json::array();
  for (const auto& e : r.entries) arr.push_back({{"re", e.rho.real()}, {"im", e.rho.imag()}, {"mult", e.multiplicity}});
  return json{{"d", r.d}, {"kappa", r.kappa}, {"resonances", arr}};
}

ResonanceSet resonance_set_from_json(const json& j) {
  reject_unknown_keys(j, {"d", "kappa", "resonances"}, "ResonanceSet");
  ResonanceSet r;
  r.d = integer(j, "d", "ResonanceSet");
  r.kappa = j.contains("kappa") ? integer(j, "kappa", "ResonanceSet") : 1;
  for (const auto& e : array(j, "resonances", "ResonanceSet")) {
    reject_unknown_keys(e, {"re", "im", "mult"}, "resonance");
    r.entries.push_back({{number(e, "re", "resonance"), number(e, "im", "resonance")},
                         e.contains("mult") ? integer(e, "mult", "resonance") : 1});
  }
  try {
    r.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return r;
}

json to_json(const SpectrumData& s) {
  json arr = json::array();
  for (const auto& e : s.entries) arr.push_back({{"r", to_json(e.r)}, {"mult", e.multiplicity}});
  return json{{"eigenvalues", arr}};
}

SpectrumData spectrum_from_json(const json& j) {
  reject_unknown_keys(j, {"eigenvalues"}, "SpectrumData");
  SpectrumData s;
  for (const auto& e : array(j, "eigenvalues", "SpectrumData")) {
    reject_unknown_keys(e, {"r", "mult"}, "eigenvalue");
    s.entries.push_back({complex_from_json(field(e, "r", "eigenvalue")),
                         e.contains("mult") ? integer(e, "mult", "eigenvalue") : 1});
  }
  return s;
}

json to_json(const PhiModel& m) {
  json q = json::array();
  for (const auto& c : m.q_coeffs) q.push_back(to_json(c));
  return json{{"resonance_set", to_json(m.resonances)}, {"phi_at_half", to_json(m.phi_at_half)}, {"q", q}};
}

PhiModel phi_model_from_json(const json& j) {
  reject_unknown_keys(j, {"resonance_set", "phi_at_half", "q"}, "PhiModel");
  PhiModel m;
  m.resonances = resonance_set_from_json(field(j, "resonance_set", "PhiModel"));
  m.phi_at_half = j.contains("phi_at_half") ? complex_from_json(j.at("phi_at_half")) : cplx(1.0);
  if (j.contains("q")) {
    for (const auto& c : array(j, "q", "PhiModel")) m.q_coeffs.push_back(complex_from_json(c));
  }
  try {
    m.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return m;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_number(v));
  add_row(row);
}

void Table::add_row(const std::vector<std::string>& values) {
  if (values.size() != columns_.size()) throw Error("Table: row width does not match header");
  rows_.push_back(values);
}

std::string Table::csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

json Table::to_json() const {
  json rows = json::array();
  for (const auto& r : rows_) {
    json obj = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(r[i].c_str(), &end);
      if (end && *end == '\0' && !r[i].empty()) {
        obj[columns_[i]] = v;
      } else {
        obj[columns_[i]] = r[i];
      }
    }
    rows.push_back(obj);
  }
  return json{{"columns", columns_}, {"rows", rows}};
}

}  // namespace cusp
