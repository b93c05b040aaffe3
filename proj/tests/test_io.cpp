#include <doctest.h>

#include <random>

#include "cusp/errors.hpp"
#include "cusp/io.hpp"
#include "models.hpp"

using namespace cusp;

TEST_CASE("json round trips") {
  std::mt19937_64 rng(3);
  const auto m = testgen::random_phi_model(rng, 2, 6, true);
  const auto back = phi_model_from_json(json::parse(to_json(m).dump()));
  REQUIRE(back.resonances.entries.size() == m.resonances.entries.size());
  for (std::size_t i = 0; i < m.resonances.entries.size(); ++i) {
    CHECK(back.resonances.entries[i].rho == m.resonances.entries[i].rho);
  }
  CHECK(back.q_coeffs == m.q_coeffs);
  CHECK(phi_eval(back, cplx(1.3, 2.0)) == phi_eval(m, cplx(1.3, 2.0)));

  ZeroList z;
  z.entries = {{cplx(0.25, 7.0), 2, true}};
  const auto zb = zero_list_from_json(to_json(z));
  CHECK(zb.entries[0].location == z.entries[0].location);
  CHECK(zb.entries[0].multiplicity == 2);
  CHECK(zb.entries[0].on_boundary);

  Lattice L = Lattice::integer(2);
  L.basis(0, 1) = 2.0;
  const auto Lb = lattice_from_json(to_json(L));
  CHECK(Lb.basis == L.basis);

  ExponentialDirichletSeries E;
  E.terms = {{cplx(1.0, 0.5), 0.0}, {cplx(-2.0, 0.0), 0.7}};
  const auto Eb = exponential_series_from_json(to_json(E));
  CHECK(Eb.terms[1].a == E.terms[1].a);

  SpectrumData sp;
  sp.entries = {{cplx(0.0, 0.25), 1}, {cplx(9.5, 0.0), 3}};
  const auto spb = spectrum_from_json(to_json(sp));
  CHECK(spb.entries[1].multiplicity == 3);
  CHECK(spb.entries[0].r == sp.entries[0].r);
}

TEST_CASE("json rejects unknown keys and invalid content") {
  CHECK_THROWS_AS(zero_list_from_json(json::parse(R"({"zeros": [], "extra": 1})")), ConfigError);
  CHECK_THROWS_AS(zero_list_from_json(json::parse(R"({"zeros": [{"re": 1, "im": 2, "mul": 1}]})")), ConfigError);
  CHECK_THROWS_AS(lattice_from_json(json::parse(R"({"d": 2, "basis": [[2, 0], [0, 2]]})")), ConfigError);
  CHECK_THROWS_AS(resonance_set_from_json(json::parse(R"({"d": 1, "resonances": [{"re": 0.9, "im": 1}]})")),
                  ConfigError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("table output") {
  Table t({"T", "value [1]"});
  t.add_row(std::vector<double>{1.5, 2.0});
  t.add_row(std::vector<std::string>{"x", "3"});
  CHECK(t.csv() == "T,value [1]\n1.5,2\nx,3\n");
  const auto j = t.to_json();
  CHECK(j["rows"][0]["T"] == 1.5);
  CHECK(j["rows"][1]["T"] == "x");
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), Error);
  CHECK(format_number(0.30685281944005469) == "0.3068528194");
}
