#include <doctest.h>

#include <Eigen/Dense>
#include <sstream>

#include "gvc/errors.hpp"
#include "gvc/ingest.hpp"
#include "gvc/networks.hpp"
#include "gvc/spectral.hpp"

using namespace gvc;

namespace {

double max_relative_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double scale = std::max({std::abs(a(i, j)), std::abs(b(i, j)), 1e-30});
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
    }
  return worst;
}

}  // namespace

TEST_CASE("canonical csv round-trips a synthetic economy") {
  SyntheticSpec spec;
  spec.countries = 3;
  spec.sectors = 2;
  spec.seed = 5;
  const Economy original = random_economy(spec);

  std::stringstream buffer;
  write_canonical_csv(original, buffer);
  const Economy parsed = parse_canonical_csv(buffer);

  CHECK(parsed.labels() == original.labels());
  CHECK(max_relative_gap(parsed.intermediates(), original.intermediates()) <=
        1e-9);
  CHECK(max_relative_gap(parsed.final_use(), original.final_use()) <= 1e-9);
  CHECK(max_relative_gap(parsed.gross_output(), original.gross_output()) <=
        1e-9);
}

TEST_CASE("duplicate canonical records accumulate") {
  std::stringstream in(
      "#countries A,B\n#sectors S\n#year 2001\n"
      "kind,origin_country,origin_sector,dest_country,dest_sector,value\n"
      "intermediate,A,S,B,S,2\n"
      "intermediate,A,S,B,S,3\n"
      "final,A,S,A,,1\n"
      "final,B,S,B,,0.5\n"
      "final,B,S,B,,0.5\n");
  const Economy e = parse_canonical_csv(in);
  CHECK(e.year() == 2001);
  CHECK(e.intermediates()(0, 1) == doctest::Approx(5.0));
  CHECK(e.final_use()(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("canonical format errors carry line numbers") {
  SUBCASE("final record with a dest_sector") {
    std::stringstream in(
        "#countries A\n#sectors S\n"
        "kind,origin_country,origin_sector,dest_country,dest_sector,value\n"
        "final,A,S,A,S,1\n");
    CHECK_THROWS_WITH_AS(parse_canonical_csv(in),
                         doctest::Contains("line 4"), ParseError);
  }
  SUBCASE("unknown country code") {
    std::stringstream in(
        "#countries A\n#sectors S\n"
        "kind,origin_country,origin_sector,dest_country,dest_sector,value\n"
        "final,Q,S,A,,1\n");
    CHECK_THROWS_WITH_AS(parse_canonical_csv(in),
                         doctest::Contains("unknown country"), ParseError);
  }
  SUBCASE("empty file") {
    std::stringstream in("");
    CHECK_THROWS_AS(parse_canonical_csv(in), ParseError);
  }
  SUBCASE("header but no records") {
    std::stringstream in(
        "#countries A\n#sectors S\n"
        "kind,origin_country,origin_sector,dest_country,dest_sector,value\n");
    CHECK_THROWS_WITH_AS(parse_canonical_csv(in), doctest::Contains("empty"),
                         ParseError);
  }
  SUBCASE("malformed value") {
    std::stringstream in(
        "#countries A\n#sectors S\n"
        "kind,origin_country,origin_sector,dest_country,dest_sector,value\n"
        "final,A,S,A,,abc\n");
    CHECK_THROWS_WITH_AS(parse_canonical_csv(in), doctest::Contains("line 4"),
                         ParseError);
  }
}

TEST_CASE("long format round-trips and validates the embedded totals") {
  SyntheticSpec spec;
  spec.countries = 2;
  spec.sectors = 3;
  spec.seed = 9;
  const Economy original = random_economy(spec);

  std::stringstream buffer;
  write_wiot_long(original, buffer);
  const LongFormatResult result = parse_wiot_long(buffer);

  CHECK(result.report.passed);
  CHECK(max_relative_gap(result.economy.intermediates(),
                         original.intermediates()) <= 1e-9);
  CHECK(max_relative_gap(result.economy.final_use(), original.final_use()) <=
        1e-9);
}

TEST_CASE("long format sums split final-demand categories") {
  std::stringstream usable(
      "year,origin_country,origin_sector,dest_country,use_category,value\n"
      "2004,A,S,A,S,0.1\n"
      "2004,A,S,B,c57,0.2\n"
      "2004,A,S,B,c58,0.3\n"
      "2004,A,S,B,c59,0.1\n"
      "2004,A,S,B,c60,0.25\n"
      "2004,A,S,B,c61,0.15\n"
      "2004,B,S,A,S,0.05\n"
      "2004,B,S,B,c57,1.0\n");
  const LongFormatResult result = parse_wiot_long(usable);
  const Economy& e = result.economy;
  CHECK(e.year() == 2004);
  REQUIRE(e.node_count() == 2);
  // the five categories collapse into one final-use cell
  CHECK(e.final_use()(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("long format rejects unknown use categories") {
  std::stringstream in(
      "year,origin_country,origin_sector,dest_country,use_category,value\n"
      "2004,A,S,A,S,0.5\n"
      "2004,A,S,A,c57,0.5\n"
      "2004,A,S,A,zz9,0.1\n");
  CHECK_THROWS_WITH_AS(parse_wiot_long(in),
                       doctest::Contains("unknown use-category"), ParseError);
}

TEST_CASE("long format rejects inconsistent country sets") {
  std::stringstream in(
      "year,origin_country,origin_sector,dest_country,use_category,value\n"
      "2004,A,S,B,S,0.5\n"
      "2004,A,S,A,c57,0.5\n");
  // B receives intermediates but never appears as an origin
  CHECK_THROWS_WITH_AS(parse_wiot_long(in),
                       doctest::Contains("country set inconsistent"),
                       ParseError);
}

TEST_CASE("rounded long exports still validate at the file tolerance") {
  SyntheticSpec spec;
  spec.countries = 2;
  spec.sectors = 3;
  spec.seed = 12;
  const Economy original = random_economy(spec);

  std::stringstream buffer;
  write_wiot_long(original, buffer, LongFormatColumns{}, 6);
  const LongFormatResult result = parse_wiot_long(buffer, LongFormatColumns{},
                                                  1e-4);
  CHECK(result.report.passed);
  CHECK(result.report.max_output_rel > 0.0);  // rounding noise is visible
  CHECK(result.report.max_output_rel <= 1e-4);
}

TEST_CASE("ring fixture produces the documented output network") {
  const Economy e = chain_example(0.3, 0.3);
  const OutputNetwork net = build_output_network(e);
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 0.3, 0, 0.3, 0, 0.3, 0, 0.3, 0;
  CHECK(net.coefficients.isApprox(expected, 1e-14));
  CHECK(net.final_demand_share[0] == doctest::Approx(0.7));
  CHECK(net.final_demand_share[1] == doctest::Approx(0.4));
  CHECK(net.final_demand_share[2] == doctest::Approx(0.7));
  CHECK(net.coefficients.rowwise().sum()[1] == doctest::Approx(0.6));
}

TEST_CASE("ring fixture dominant eigenvalue is sqrt(2pq)") {
  for (const auto [p, q] : {std::pair{0.2, 0.4}, {0.3, 0.3}, {0.05, 0.45}}) {
    const Economy e = chain_example(p, q);
    const OutputNetwork net = build_output_network(e);
    const SpectralSummary s = dominant_eigenpair(net.coefficients);
    CHECK(std::abs(s.lambda - std::sqrt(2 * p * q)) <= 1e-10);
  }
}

TEST_CASE("ring fixture rejects out-of-range shares") {
  CHECK_THROWS_AS(chain_example(0.5, 0.5), DomainError);
  CHECK_THROWS_AS(chain_example(0.0, 0.3), DomainError);
  CHECK_THROWS_AS(chain_example(-0.1, 0.3), DomainError);
  CHECK_THROWS_AS(chain_example(0.7, 0.4), DomainError);
}

TEST_CASE("synthetic generation is deterministic in the seed") {
  SyntheticSpec spec;
  spec.countries = 3;
  spec.sectors = 4;
  spec.density = 0.5;
  spec.seed = 7;
  const Economy a = random_economy(spec);
  const Economy b = random_economy(spec);
  CHECK(a.intermediates() == b.intermediates());
  CHECK(a.final_use() == b.final_use());
  CHECK(a.gross_output() == b.gross_output());
}

TEST_CASE("synthetic economies pass validation cleanly") {
  SyntheticSpec spec;
  spec.countries = 4;
  spec.sectors = 3;
  spec.density = 0.3;
  spec.seed = 21;
  const Economy e = random_economy(spec);
  CHECK(validate(e, 1e-12).passed);
  CHECK(e.sanitize_stats().clean());
  // both absorption shares strictly positive by construction
  CHECK(build_output_network(e).final_demand_share.minCoeff() > 0.0);
  CHECK(build_input_network(e).value_added_share.minCoeff() > 0.0);
}

TEST_CASE("spectral targets are hit within the documented tolerance") {
  for (const double target : {0.05, 0.5, 0.95}) {
    SyntheticSpec spec;
    spec.countries = 2;
    spec.sectors = 3;
    spec.seed = 33;
    spec.spectral_target = target;
    const Economy e = random_economy(spec);
    const OutputNetwork net = build_output_network(e);
    const double lambda = dominant_eigenpair(net.coefficients).lambda;
    CHECK(std::abs(lambda - target) <= 1e-3);
  }
}

TEST_CASE("extreme spectral target at full density") {
  SyntheticSpec spec;
  spec.countries = 3;
  spec.sectors = 2;
  spec.density = 1.0;
  spec.seed = 4;
  spec.spectral_target = 0.999;
  const Economy e = random_economy(spec);
  const double lambda =
      dominant_eigenpair(build_output_network(e).coefficients).lambda;
  CHECK(std::abs(lambda - 0.999) <= 1e-3);
  CHECK(validate(e, 1e-12).passed);
}

TEST_CASE("long format reader assembles a WIOD-sized node grid") {
  // 44 countries x 56 sectors discovered from a sparse flow pattern
  std::ostringstream body;
  body << "year,origin_country,origin_sector,dest_country,use_category,value\n";
  const int J = 44, S = 56;
  const auto country = [](int c) { return "N" + std::to_string(c); };
  const auto sector = [](int s) { return "c" + std::to_string(s + 1); };
  for (int c = 0; c < J; ++c) {
    for (int s = 0; s < S; ++s) {
      // domestic self-flow plus a ring flow to the next country
      body << "2014," << country(c) << ',' << sector(s) << ',' << country(c)
           << ',' << sector(s) << ",0.2\n";
      body << "2014," << country(c) << ',' << sector(s) << ','
           << country((c + 1) % J) << ',' << sector((s + 1) % S) << ",0.1\n";
      body << "2014," << country(c) << ',' << sector(s) << ',' << country(c)
           << ",c57,0.7\n";
    }
  }
  std::istringstream in(body.str());
  const LongFormatResult result = parse_wiot_long(in);
  CHECK(result.economy.node_count() == 2464);
  CHECK(result.economy.labels().country_count() == 44);
  CHECK(result.economy.labels().sector_count() == 56);
  CHECK(result.report.passed);
}

TEST_CASE("synthetic spec tokens parse") {
  const SyntheticSpec spec = SyntheticSpec::from_tokens(
      {"J=5", "S=2", "density=0.25", "lambda=0.9", "seed=99"});
  CHECK(spec.countries == 5);
  CHECK(spec.sectors == 2);
  CHECK(spec.density == doctest::Approx(0.25));
  CHECK(spec.spectral_target.value() == doctest::Approx(0.9));
  CHECK(spec.seed == 99);
  CHECK_THROWS_AS(SyntheticSpec::from_tokens({"bogus"}), DomainError);
  CHECK_THROWS_AS(SyntheticSpec::from_tokens({"what=1"}), DomainError);
}
