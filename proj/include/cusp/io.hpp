#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cusp/cusp_geometry.hpp"
#include "cusp/dirichlet.hpp"
#include "cusp/scattering.hpp"
#include "cusp/zerocount.hpp"

namespace cusp {

using json = nlohmann::json;

// Complex values are stored as {"re": x, "im": y}. Unknown keys are rejected with ConfigError.
json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const ZeroList& z);
ZeroList zero_list_from_json(const json& j);

json to_json(const ExponentialDirichletSeries& L);
ExponentialDirichletSeries exponential_series_from_json(const json& j);
json to_json(const ClassicalDirichletSeries& L);
ClassicalDirichletSeries classical_series_from_json(const json& j);

json to_json(const Lattice& L);
Lattice lattice_from_json(const json& j);

json to_json(const ResonanceSet& r);
ResonanceSet resonance_set_from_json(const json& j);
json to_json(const SpectrumData& s);
SpectrumData spectrum_from_json(const json& j);
json to_json(const PhiModel& m);
PhiModel phi_model_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Throws ConfigError naming the first key of j outside allowed.
void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where);

// Tidy table: header row, one observation per row, fixed %.10g formatting.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& values);
  std::string csv() const;
  json to_json() const;
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double v);

}  // namespace cusp
