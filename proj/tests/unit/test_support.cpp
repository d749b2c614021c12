#include <doctest.h>

#include <cmath>

#include "adlab/error.hpp"
#include "adlab/json_io.hpp"
#include "adlab/philox.hpp"
#include "adlab/summation.hpp"
#include "oracles.hpp"

using namespace adlab;

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32({0u, 0u})({0u, 0u, 0u, 0u}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32({0xffffffffu, 0xffffffffu})({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32({0xa4093822u, 0x299f31d0u})({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  CHECK(Philox4x32::to_unit(0u) > 0.0);
  CHECK(Philox4x32::to_unit(0xffffffffu) < 1.0);
}

TEST_CASE("CompensatedSum") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-12));
  CompensatedSum a(1e100);
  a.add(1.0);
  a.add(-1e100);
  CHECK(a.value() == 1.0);
}

TEST_CASE("Psi JSON round trip") {
  const auto mixed = PsiDistribution({{0.5, 0.5}}, {{1.0, 0.0}, {3.0, 0.5}});
  const auto back = psi_from_json(Json::parse(psi_to_json(mixed).dump()));
  REQUIRE(back.atoms().size() == 1);
  CHECK(back.atoms()[0].t == 0.5);
  CHECK(back.knots().size() == 2);
  for (const double z : {-1.0, 0.3, 2.0}) CHECK(laplace(back, z, 0) == laplace(mixed, z, 0));

  const auto path = oracle::temp_file("adlab_psi_ok.json", R"({"atoms": [{"t": 1.0, "mass": 1.0}]})");
  const auto p = load_psi(path);
  CHECK(p.provenance() == PsiDistribution::Provenance::kFile);
  CHECK(moment(p, 2) == 1.0);

  CHECK_THROWS_AS(load_psi("/nonexistent/psi.json"), ConfigError);
  const auto bad = oracle::temp_file("adlab_psi_bad.json", R"({"atoms": [], "extra": 1})");
  CHECK_THROWS_AS(load_psi(bad), ConfigError);
  const auto junk = oracle::temp_file("adlab_psi_junk.json", "not json");
  try {
    load_psi(junk);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(junk.string()) != std::string::npos);
  }
}

TEST_CASE("doubles survive a JSON round trip") {
  for (const double v : {0.1, 1.0 / 3.0, 6.02214076e23, 4.9e-324, -2.2250738585072014e-308}) {
    const Json j = v;
    CHECK(Json::parse(j.dump()).get<double>() == v);
  }
}
