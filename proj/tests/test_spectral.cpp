#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gvc/errors.hpp"
#include "gvc/ingest.hpp"
#include "gvc/markov.hpp"
#include "gvc/networks.hpp"
#include "gvc/spectral.hpp"

using namespace gvc;

namespace {

Eigen::MatrixXd ring_coefficients(double p, double q) {
  return build_output_network(chain_example(p, q)).coefficients;
}

Eigen::VectorXd to_unit_sum(Eigen::VectorXd v) { return v / v.sum(); }

}  // namespace

TEST_CASE("ring eigenpair matches the closed forms") {
  const double p = 0.3, q = 0.3;
  const Eigen::MatrixXd B = ring_coefficients(p, q);
  const SpectralSummary s = dominant_eigenpair(B);
  const double lambda = std::sqrt(2 * p * q);
  CHECK(std::abs(s.lambda - lambda) <= 1e-10);
  CHECK(s.residual <= 1e-12);

  // right vector proportional to (p, lambda, q), left to (q, lambda, p)
  Eigen::Vector3d right_expected(p, lambda, q);
  Eigen::Vector3d left_expected(q, lambda, p);
  CHECK((to_unit_sum(s.rho_right) - to_unit_sum(right_expected))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
  CHECK((to_unit_sum(s.rho_left) - to_unit_sum(left_expected))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);

  // contract normalizations
  CHECK(s.rho_left.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.rho_left.dot(s.rho_right) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("asymmetric ring still satisfies the eigen-residual contract") {
  const Eigen::MatrixXd B = ring_coefficients(0.1, 0.45);
  const SpectralSummary s = dominant_eigenpair(B);
  CHECK(std::abs(s.lambda - std::sqrt(2 * 0.1 * 0.45)) <= 1e-10);
  CHECK((B * s.rho_right - s.lambda * s.rho_right).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK((B.transpose() * s.rho_left - s.lambda * s.rho_left)
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("constant-row-sum matrices have a flat right eigenvector") {
  Eigen::MatrixXd q(4, 4);
  q << 0.1, 0.2, 0.3, 0.1,
       0.2, 0.1, 0.1, 0.3,
       0.3, 0.1, 0.2, 0.1,
       0.1, 0.3, 0.1, 0.2;
  const SpectralSummary s = dominant_eigenpair(q);
  CHECK(std::abs(s.lambda - 0.7) <= 1e-11);
  const Eigen::VectorXd flat = to_unit_sum(s.rho_right);
  CHECK((flat - Eigen::VectorXd::Constant(4, 0.25)).cwiseAbs().maxCoeff() <=
        1e-11);
}

TEST_CASE("zero matrix converges immediately") {
  const SpectralSummary s = dominant_eigenpair(Eigen::MatrixXd::Zero(3, 3));
  CHECK(s.lambda == doctest::Approx(0.0));
  CHECK(s.residual <= 1e-15);
}

TEST_CASE("reducible support is reported") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(3, 3);
  q(0, 0) = 0.9;  // one dominant block, rest disconnected
  CHECK_THROWS_AS(dominant_eigenpair(q), IrreducibilityError);
}

TEST_CASE("defective matrices exhaust the iteration budget") {
  // nilpotent block: the residual decays like 1/k, far too slow for 1e-12
  Eigen::MatrixXd q(2, 2);
  q << 0.0, 1.0, 0.0, 0.0;
  PowerOptions options;
  options.max_iterations = 3000;
  CHECK_THROWS_AS(dominant_eigenpair(q, options), ConvergenceError);
}

TEST_CASE("product distribution of the ring is flat-center regardless of p,q") {
  for (const auto [p, q] : {std::pair{0.05, 0.45}, {0.3, 0.3}, {0.45, 0.1}}) {
    const SpectralSummary s = dominant_eigenpair(ring_coefficients(p, q));
    const Eigen::VectorXd prod = product_distribution(s);
    CHECK(std::abs(prod[0] - 0.25) <= 1e-10);
    CHECK(std::abs(prod[1] - 0.50) <= 1e-10);
    CHECK(std::abs(prod[2] - 0.25) <= 1e-10);
    CHECK(prod.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("product distributions of both networks coincide") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 10u}) {
    SyntheticSpec spec;
    spec.countries = 2 + static_cast<int>(seed % 3);
    spec.sectors = 2 + static_cast<int>(seed % 4);
    spec.density = 0.3 + 0.1 * static_cast<double>(seed % 5);
    spec.seed = seed;
    const Economy e = random_economy(spec);
    const ProductInvarianceReport report = verify_product_invariance(
        build_input_network(e), build_output_network(e), e.gross_output());
    REQUIRE(report.product_gap <= 1e-9);
    REQUIRE(report.right_transform_gap <= 1e-9);
    REQUIRE(report.left_transform_gap <= 1e-9);
  }
}

TEST_CASE("product invariance fails loudly for mismatched economies") {
  SyntheticSpec spec;
  spec.seed = 41;
  const Economy e1 = random_economy(spec);
  spec.seed = 42;
  const Economy e2 = random_economy(spec);
  const ProductInvarianceReport report = verify_product_invariance(
      build_input_network(e1), build_output_network(e2), e1.gross_output());
  CHECK(report.product_gap > 1e-4);
}

TEST_CASE("shared dominant eigenvalue across the two networks") {
  SyntheticSpec spec;
  spec.countries = 3;
  spec.sectors = 3;
  spec.seed = 77;
  const Economy e = random_economy(spec);
  const double la =
      dominant_eigenpair(build_input_network(e).coefficients).lambda;
  const double lb =
      dominant_eigenpair(build_output_network(e).coefficients).lambda;
  CHECK(std::abs(la - lb) <= 1e-9);
}

TEST_CASE("resolvent centrality at kappa = 1 is the chain-length metric") {
  SyntheticSpec spec;
  spec.seed = 6;
  const Economy e = random_economy(spec);
  const OutputNetwork out = build_output_network(e);
  const SpectralSummary s = dominant_eigenpair(out.coefficients);
  const Eigen::VectorXd u_kappa =
      parametrized_rank_vector(out.coefficients, 1.0, s.lambda);
  const Eigen::VectorXd u =
      fundamental(AbsorbingChain::output_chain(out)).time_mean;
  CHECK((u_kappa - u).cwiseAbs().maxCoeff() / u.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("resolvent centrality recovers the degree vector as kappa -> 0") {
  const Eigen::MatrixXd B = ring_coefficients(0.25, 0.35);
  const double lambda = std::sqrt(2 * 0.25 * 0.35);
  const Eigen::VectorXd degree = B.rowwise().sum();
  for (const double kappa : {1e-4, 1e-6}) {
    const Eigen::VectorXd u = parametrized_rank_vector(B, kappa, lambda);
    const Eigen::VectorXd slope = (u - Eigen::VectorXd::Ones(3)) / kappa;
    // remaining terms are kappa * B^2 1 + O(kappa^2)
    const double allowance =
        kappa * (B * B * Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() * 2.0;
    CHECK((slope - degree).cwiseAbs().maxCoeff() <= allowance);
  }
}

TEST_CASE("resolvent centrality rejects kappa at or past the radius") {
  const Eigen::MatrixXd B = ring_coefficients(0.3, 0.3);
  const double lambda = std::sqrt(0.18);
  CHECK_THROWS_AS(parametrized_rank_vector(B, 1.0 / lambda, lambda),
                  DivergenceError);
  CHECK_THROWS_AS(parametrized_rank_vector(B, 0.0, lambda), DomainError);
}

TEST_CASE("limit rank vectors match the ring's hand values") {
  const Eigen::MatrixXd B = ring_coefficients(0.3, 0.3);
  const SpectralSummary s = dominant_eigenpair(B);
  const LimitRankVectors limits = limit_rank_vectors(B, s);
  CHECK(limits.degree_limit.isApprox(Eigen::Vector3d(1.3, 1.6, 1.3), 1e-12));
  // scaled Perron vector; its ordering matches the eigenvector's
  CHECK(limits.eigen_limit[1] > limits.eigen_limit[0]);
  CHECK(std::abs(limits.eigen_limit[0] - limits.eigen_limit[2]) <= 1e-9);
}

TEST_CASE("constant-row-sum chains make both limits flat") {
  Eigen::MatrixXd q(3, 3);
  q << 0.2, 0.2, 0.2,
       0.3, 0.2, 0.1,
       0.1, 0.1, 0.4;
  const SpectralSummary s = dominant_eigenpair(q);
  const LimitRankVectors limits = limit_rank_vectors(q, s);
  CHECK((limits.degree_limit - Eigen::VectorXd::Constant(3, 1.6))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  const Eigen::VectorXd eig = to_unit_sum(limits.eigen_limit);
  CHECK((eig - Eigen::VectorXd::Constant(3, 1.0 / 3)).cwiseAbs().maxCoeff() <=
        1e-10);
}

TEST_CASE("spearman handles monotone, reversed and tied data") {
  Eigen::Vector3d a(1, 2, 3);
  CHECK(spearman(a, Eigen::Vector3d(10, 20, 30)) == doctest::Approx(1.0));
  CHECK(spearman(a, Eigen::Vector3d(3, 2, 1)) == doctest::Approx(-1.0));
  // average ranks for ties: (1.5, 1.5, 3) on both sides
  CHECK(spearman(Eigen::Vector3d(1, 1, 2), Eigen::Vector3d(5, 5, 9)) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(spearman(Eigen::Vector3d(1, 1, 1), a),
                  UndefinedCorrelationError);
  CHECK_THROWS_AS(spearman(a, Eigen::Vector2d(1, 2)), DimensionError);
}

TEST_CASE("spearman tie handling against a hand-computed mixed case") {
  Eigen::VectorXd a(5), b(5);
  a << 1, 2, 2, 3, 4;   // ranks 1, 2.5, 2.5, 4, 5
  b << 10, 9, 11, 12, 13;  // ranks 2, 1, 3, 4, 5
  // Pearson of the rank vectors, computed by hand:
  // da = (-2, -0.5, -0.5, 1, 2), db = (-1, -2, 0, 1, 2)
  // dot = 2 + 1 + 0 + 1 + 4 = 8, |da| = sqrt(9.5), |db| = sqrt(10)
  const double expected = 8.0 / std::sqrt(9.5 * 10.0);
  CHECK(spearman(a, b) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ranking limits hold near both ends of the kappa range") {
  for (const double target : {0.05, 0.95}) {
    SyntheticSpec spec;
    spec.countries = 3;
    spec.sectors = 4;
    spec.seed = 55;
    spec.spectral_target = target;
    const Economy e = random_economy(spec);
    const OutputNetwork out = build_output_network(e);
    const SpectralSummary s = dominant_eigenpair(out.coefficients);
    const LimitRankVectors limits = limit_rank_vectors(out.coefficients, s);

    const Eigen::VectorXd low =
        parametrized_rank_vector(out.coefficients, 1e-3, s.lambda);
    CHECK(spearman(low, limits.degree_limit) >= 0.999);
    const Eigen::VectorXd high =
        parametrized_rank_vector(out.coefficients, 0.999 / s.lambda, s.lambda);
    CHECK(spearman(high, s.rho_right) >= 0.999);
  }
}

TEST_CASE("high-lambda economies rank by the Perron vector at kappa = 1") {
  SyntheticSpec spec;
  spec.countries = 3;
  spec.sectors = 4;
  spec.seed = 70;
  spec.spectral_target = 0.98;
  const Economy e = random_economy(spec);
  const OutputNetwork out = build_output_network(e);
  const SpectralSummary s = dominant_eigenpair(out.coefficients);
  const Eigen::VectorXd u =
      parametrized_rank_vector(out.coefficients, 1.0, s.lambda);
  CHECK(spearman(u, s.rho_right) >= 0.99);
}
