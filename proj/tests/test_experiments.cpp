#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coherlss/errors.hpp"
#include "coherlss/experiments.hpp"

using namespace coherlss;

namespace {

ExperimentConfig tiny()
{
    ExperimentConfig cfg;
    cfg.N = 256;
    cfg.B = 40;
    cfg.M = 16;
    cfg.replicates = 3;
    cfg.grid_stride = 8;
    cfg.seed = 11;
    return cfg;
}

} // namespace

TEST_CASE("white noise sweep has a zero oracle column")
{
    auto cfg = tiny();
    cfg.model = "white_noise";
    const auto res = frequency_sweep(cfg);
    CHECK(res.rows.size() == 3 * 32);
    CHECK(res.mean_rows.size() == 32);
    for (const auto& r : res.rows) {
        CHECK(r.r_oracle == 0.0);
        CHECK(r.psi == r.lss_raw);
    }
}

TEST_CASE("paper-scale configuration validates")
{
    ExperimentConfig cfg;
    cfg.N = 10119;
    cfg.B = 1600;
    cfg.M = 800;
    cfg.L = 21;
    CHECK_NOTHROW(cfg.validate());
    const auto lss = cfg.lss_config();
    CHECK(lss.ratio() == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(lss.effective_alpha() == doctest::Approx(0.8).epsilon(0.01));
}

TEST_CASE("sweep rows and means are consistent")
{
    const auto cfg = tiny();
    const auto res = frequency_sweep(cfg);
    const std::size_t G = res.mean_rows.size();
    for (std::size_t i = 0; i < G; ++i) {
        double mean = 0.0;
        for (std::size_t r = 0; r < res.seeds.size(); ++r) {
            const auto& row = res.rows[r * G + i];
            CHECK(row.nu == res.mean_rows[i].nu);
            CHECK(row.seed == res.seeds[r]);
            mean += row.lss_raw;
        }
        CHECK(res.mean_rows[i].lss_raw == doctest::Approx(mean / res.seeds.size()));
    }
    CHECK(res.fraction_improved >= 0.0);
    CHECK(res.fraction_improved <= 1.0);
}

TEST_CASE("studies are reproducible and independent of thread count")
{
    auto cfg = tiny();
    cfg.threads = 1;
    const auto a = frequency_sweep(cfg);
    cfg.threads = 4;
    const auto b = frequency_sweep(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].psi == b.rows[i].psi);
        CHECK(a.rows[i].psi_hat == b.rows[i].psi_hat);
    }
    CHECK(a.median_sup_psi == b.median_sup_psi);

    cfg.threads = 1;
    const auto h1 = histogram_study(cfg, 4);
    cfg.threads = 3;
    const auto h2 = histogram_study(cfg, 4);
    CHECK(h1.sup_psi == h2.sup_psi);
    CHECK(h1.sup_psi_hat == h2.sup_psi_hat);
}

TEST_CASE("replicate seeds differ")
{
    CHECK(replicate_seed(7, 0) != replicate_seed(7, 1));
    CHECK(replicate_seed(7, 0) != replicate_seed(8, 0));
    CHECK(replicate_seed(7, 3) == replicate_seed(7, 3));
}

TEST_CASE("scaling geometry")
{
    for (long M : {40L, 80L, 160L}) {
        const auto g = scaling_geometry(M, 0.8, 0.5);
        CHECK(g.B % 2 == 0);
        CHECK(static_cast<double>(M) / (g.B + 1) <= 0.5);
        CHECK(static_cast<double>(M) / (g.B - 1) > 0.5);
        CHECK(g.N == std::lround(std::pow(g.B, 1 / 0.8)));
    }
    CHECK(scaling_geometry(40, 0.8, 0.5).B == 80);
    CHECK(scaling_geometry(40, 0.8, 0.5).N == 239);
}

TEST_CASE("scaling study runs at small sizes")
{
    auto cfg = tiny();
    cfg.m_list = {8, 16};
    cfg.replicates = 2;
    const auto res = scaling_study(cfg);
    REQUIRE(res.rows.size() == 2);
    for (const auto& row : res.rows) {
        CHECK(row.scale2 == doctest::Approx(std::pow(double(row.N) / row.B, 2)));
        CHECK(row.scale3 == doctest::Approx(std::pow(double(row.N) / row.B, 3)));
        CHECK(row.median_sup_lss > 0.0);
    }
}

TEST_CASE("quantiles")
{
    const auto q = quantiles({3.0, 1.0, 2.0, 5.0, 4.0});
    CHECK(q.values[0] == doctest::Approx(1.2));
    CHECK(q.values[2] == doctest::Approx(3.0));
    CHECK(q.values[4] == doctest::Approx(4.8));
    CHECK(median({1.0, 4.0}) == doctest::Approx(2.5));
}

TEST_CASE("histogram with a single replicate")
{
    const auto h = histogram_study(tiny(), 1);
    CHECK(h.sup_lss.size() == 1);
    for (double v : h.q_lss.values) {
        CHECK(v == h.sup_lss[0]);
    }
    CHECK_THROWS_AS(histogram_study(tiny(), 0), InvalidArgument);
}

TEST_CASE("localization trivial cases")
{
    auto cfg = tiny();
    cfg.M = 8;
    const auto wide = eigenvalue_localization_check(cfg, 2, 10.0);
    CHECK(wide.pass);
    CHECK(wide.violations == 0);
    CHECK(wide.eigenvalues_checked == 2 * 32 * 8);

    cfg.M = 1;
    const auto single = eigenvalue_localization_check(cfg, 1, 1e-9);
    CHECK(single.pass);
    CHECK(single.worst_excursion == 0.0);
}

TEST_CASE("exact DFT covariance")
{
    const auto wn = ModelSpec::white_noise();
    CHECK(std::abs(exact_dft_covariance(wn, 64, 0.25, 0.25) - 1.0) < 1e-14);
    CHECK(std::abs(exact_dft_covariance(wn, 64, 0.25, 0.25 + 3.0 / 64)) < 1e-14);
    CHECK_THROWS_AS(exact_dft_covariance(wn, 64, 0.25, 0.2513), InvalidArgument);

    // brute force: E xi(a) xi(b)^* = (1/N) sum_{n,k} r_{n-k} e^{-2i pi (n a - k b)}
    const auto ar = ModelSpec::ar1(0.4);
    const long N = 48;
    for (auto [a, b] : {std::pair{0.25, 0.25}, std::pair{5.0 / 48, 9.0 / 48}}) {
        std::complex<double> brute = 0.0;
        for (long n = 0; n < N; ++n) {
            for (long k = 0; k < N; ++k) {
                brute += autocovariance(ar, n - k) *
                         std::polar(1.0, -2.0 * std::numbers::pi * (n * a - k * b));
            }
        }
        brute /= static_cast<double>(N);
        CHECK(std::abs(exact_dft_covariance(ar, N, a, b) - brute) < 1e-12);
    }

    const auto rows = dft_covariance_check(wn, {64, 128}, 0.25, 0.25);
    for (const auto& r : rows) {
        CHECK(r.deviation < 1e-13);
    }
}
