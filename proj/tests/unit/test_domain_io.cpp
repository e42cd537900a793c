#include <doctest.h>

#include "cmclab/domain_io.hpp"
#include "cmclab/errors.hpp"

using namespace cmclab;

TEST_CASE("domain JSON round trip") {
  for (const Domain& d : {make_disk({0.1, 0.2}, 0.5, "rim"), make_annulus({}, 0.5, 1.0),
                          make_lens({-0.4, 0}, {0.4, 0}, 1.0, 0.5, "A", "B"),
                          make_polygon({{0, 0}, {1, 0}, {1, 1}}, {"a", "b", "c"})}) {
    const auto j = domain_to_json(d);
    const Domain back = domain_from_json(j);
    CHECK(domain_to_json(back) == j);
    REQUIRE(back.pieces().size() == d.pieces().size());
    for (std::size_t k = 0; k < d.pieces().size(); ++k) {
      CHECK(back.pieces()[k].data_tag == d.pieces()[k].data_tag);
      CHECK(back.pieces()[k].exterior_curvature == doctest::Approx(d.pieces()[k].exterior_curvature));
    }
  }
}

TEST_CASE("flat piece list and errors") {
  const auto j = nlohmann::ordered_json::parse(R"({"pieces": [
      {"kind": "segment", "start": [0, 0], "end": [1, 0], "data_tag": "a"},
      {"kind": "segment", "start": [1, 0], "end": [0, 1], "data_tag": "b"},
      {"kind": "segment", "start": [0, 1], "end": [0, 0], "data_tag": "c"}]})");
  CHECK(domain_from_json(j).pieces().size() == 3);

  auto bad = j;
  bad["pieces"][0]["kind"] = "spline";
  CHECK_THROWS_AS(domain_from_json(bad), ConfigError);
  bad = j;
  bad["pieces"][1]["end"] = {0, 2};
  CHECK_THROWS_AS(domain_from_json(bad), ConfigError);
  bad = j;
  bad["pieces"][0]["exterior_curvature"] = 1.0;
  CHECK_THROWS_AS(domain_from_json(bad), ConfigError);
  CHECK_THROWS_AS(domain_from_json(nlohmann::ordered_json::array()), ConfigError);
}

TEST_CASE("arc JSON round trip") {
  const CircleArc a({0.5, -1.0}, 2.0, 1.0, 0.25, Orientation::cw);
  const CircleArc b = arc_from_json(arc_to_json(a));
  CHECK(b.center() == a.center());
  CHECK(b.angle_end() == a.angle_end());
  CHECK(b.orientation() == Orientation::cw);
}
