#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "blurkit/dct.hpp"
#include "test_util.hpp"

using namespace blurkit;

TEST_CASE("dct2 basics") {
    SUBCASE("2x2 constant patch keeps only the DC term") {
        const GrayImage patch(2, 2, 1.0);
        const DctMatrix c = dct2(patch);
        CHECK(c.at(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(c.at(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(c.at(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(c.at(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("non-square patch is rejected") {
        CHECK_THROWS_AS(dct2(GrayImage(2, 3, 0.5)), std::invalid_argument);
    }

    SUBCASE("matches the quadruple-loop oracle on random patches") {
        for (std::uint32_t seed = 0; seed < 5; ++seed) {
            const GrayImage patch = testutil::random_image(8, 8, seed);
            const DctMatrix ours = dct2(patch);
            const std::vector<double> oracle = testutil::dct2_oracle(patch);
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                CHECK(ours.coeffs[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
            }
        }
    }

    SUBCASE("inverse transform round-trips") {
        const GrayImage patch = testutil::random_image(4, 4, 7);
        const std::vector<double> back = idct2(dct2(patch));
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(back[i] == doctest::Approx(patch.raw()[i]).epsilon(1e-9));
        }
    }

    SUBCASE("energy is preserved") {
        const GrayImage patch = testutil::random_image(8, 8, 42);
        const DctMatrix c = dct2(patch);
        double e_patch = 0.0, e_coeff = 0.0;
        for (double v : patch.raw()) e_patch += v * v;
        for (double v : c.coeffs) e_coeff += v * v;
        CHECK(e_coeff == doctest::Approx(e_patch).epsilon(1e-9));
    }
}

TEST_CASE("freq_average") {
    SUBCASE("2x2 worked example") {
        DctMatrix c;
        c.m = 2;
        c.coeffs = {4.0, 2.0, 2.0, 0.0};
        const std::vector<double> v = freq_average(c);
        REQUIRE(v.size() == 3);
        CHECK(v[0] == 4.0);
        CHECK(v[1] == 2.0);
        CHECK(v[2] == 0.0);
    }

    SUBCASE("constant coefficients average to themselves") {
        DctMatrix c;
        c.m = 3;
        c.coeffs.assign(9, 0.37);
        for (double v : freq_average(c)) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
    }

    SUBCASE("matches the enumeration oracle") {
        for (int m : {3, 8}) {
            const GrayImage patch = testutil::random_image(m, m, 5);
            const DctMatrix c = dct2(patch);
            const std::vector<double> ours = freq_average(c);
            const std::vector<double> oracle = testutil::freq_average_oracle(c.coeffs, m);
            REQUIRE(ours.size() == oracle.size());
            for (std::size_t i = 0; i < ours.size(); ++i) CHECK(ours[i] == oracle[i]);
        }
    }
}

TEST_CASE("sharpness_ratio") {
    SUBCASE("self ratio is one") {
        const std::vector<double> c = {1.5, -2.0, 0.25};
        for (double v : sharpness_ratio(c, c)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("zero numerator gives zero") {
        const std::vector<double> z = {0.0, 0.0, 0.0};
        const std::vector<double> d = {1.0, 0.0, 2.0};
        for (double v : sharpness_ratio(z, d)) CHECK(v == 0.0);
    }

    SUBCASE("elementwise division") {
        const std::vector<double> r = sharpness_ratio({2, 1, 0.5}, {1, 2, 0.5});
        CHECK(r[0] == doctest::Approx(2.0));
        CHECK(r[1] == doctest::Approx(0.5));
        CHECK(r[2] == doctest::Approx(1.0));
    }

    SUBCASE("length mismatch throws") {
        CHECK_THROWS_AS(sharpness_ratio({1.0}, {1.0, 2.0}), std::invalid_argument);
    }
}

TEST_CASE("dcr") {
    SUBCASE("constant vector gives the weight sum") {
        DcrParams p;
        p.band_low = 3;
        p.band_high = 5;
        const std::vector<double> r(7, 0.4);
        CHECK(dcr(r, p) == doctest::Approx(3.0 * 0.4).epsilon(1e-12));
    }

    SUBCASE("three singleton bands") {
        DcrParams p;
        p.band_low = 2;
        p.band_high = 3;
        CHECK(dcr({1.0, 2.0, 3.0}, p) == doctest::Approx(6.0).epsilon(1e-12));
    }

    SUBCASE("zero weights rejected") {
        DcrParams p;
        p.weight_low = p.weight_mid = p.weight_high = 0.0;
        CHECK_THROWS_AS(dcr({1.0, 2.0, 3.0}, p), std::invalid_argument);
    }

    SUBCASE("band splits must stay in range") {
        DcrParams p;
        p.band_low = 1;  // must exceed 1
        p.band_high = 3;
        CHECK_THROWS_AS(dcr({1.0, 2.0, 3.0}, p), std::invalid_argument);
        p.band_low = 2;
        p.band_high = 4;  // must be <= n
        CHECK_THROWS_AS(dcr({1.0, 2.0, 3.0}, p), std::invalid_argument);
    }

    SUBCASE("auto splits cover 15-long vectors as 5/5/5") {
        const DcrParams p = DcrParams{}.resolved(15);
        CHECK(p.band_low == 6);
        CHECK(p.band_high == 11);
    }
}

TEST_CASE("map_dcr") {
    const DcrParams p;

    SUBCASE("anchor values") {
        CHECK(map_dcr(0.0, p) == 0.0);
        CHECK(map_dcr(1e9, p) > 0.999999);
        CHECK(map_dcr(1.0, p) == doctest::Approx(0.197376).epsilon(1e-6));
    }

    SUBCASE("strictly increasing") {
        double prev = -1.0;
        for (double d : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
            const double m = map_dcr(d, p);
            CHECK(m > prev);
            CHECK(m >= 0.0);
            CHECK(m <= 1.0);
            prev = m;
        }
    }

    SUBCASE("negative input rejected") {
        CHECK_THROWS_AS(map_dcr(-0.5, p), std::invalid_argument);
    }
}

TEST_CASE("dct_descriptors") {
    SUBCASE("m=2 order 2 keeps three coefficients") {
        const DctMatrix c = dct2(GrayImage(2, 2, 1.0));
        const std::vector<double> d = dct_descriptors(c, 2);
        REQUIRE(d.size() == 3);  // pairs (1,1),(1,2),(2,1)
        CHECK(d[0] == doctest::Approx(2.0));
        CHECK(d[1] == doctest::Approx(0.0));
        CHECK(d[2] == doctest::Approx(0.0));
    }

    SUBCASE("m=2 order 3 keeps all four") {
        const DctMatrix c = dct2(GrayImage(2, 2, 0.5));
        CHECK(dct_descriptors(c, 3).size() == 4);
    }

    SUBCASE("order 1 keeps only the DC coefficient") {
        const GrayImage patch = testutil::random_image(8, 8, 2);
        const DctMatrix c = dct2(patch);
        const std::vector<double> d = dct_descriptors(c, 1);
        REQUIRE(d.size() == 1);
        CHECK(d[0] == c.at(0, 0));
    }

    SUBCASE("order bounds") {
        const DctMatrix c = dct2(GrayImage(2, 2, 0.5));
        CHECK_THROWS_AS(dct_descriptors(c, 0), std::invalid_argument);
        CHECK_THROWS_AS(dct_descriptors(c, 4), std::invalid_argument);
    }
}

namespace {

// Windowed weighted mean straight from the definition.
double refine_window_oracle(const BlurMap& raw, const DescriptorField& df, int cy, int cx,
                            int window, double strength) {
    const int r = window / 2;
    double acc = 0.0, norm = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const int y = testutil::mirror(cy + dy, raw.height());
            const int x = testutil::mirror(cx + dx, raw.width());
            double dist = 0.0;
            for (int t = 0; t < df.count; ++t) {
                const double d = df.at(y, x)[t] - df.at(cy, cx)[t];
                dist += d * d;
            }
            const double w = std::exp(-dist / strength);
            acc += w * raw.at(y, x);
            norm += w;
        }
    }
    return acc / norm;
}

DescriptorField constant_descriptors(int h, int w, int count) {
    DescriptorField df;
    df.height = h;
    df.width = w;
    df.count = count;
    df.values.assign(static_cast<std::size_t>(h) * w * count, 0.3);
    return df;
}

}  // namespace

TEST_CASE("refine_map") {
    SUBCASE("constant map stays constant") {
        const BlurMap raw(6, 6, 0.6);
        const BlurMap out = refine_map(raw, constant_descriptors(6, 6, 3), RefineParams{});
        for (double v : out.raw()) CHECK(v == doctest::Approx(0.6).epsilon(1e-12));
    }

    SUBCASE("degenerate blend uses only the small window") {
        const BlurMap raw = testutil::random_image(8, 8, 31);
        BlurMapConfig cfg;
        const DescriptorField df = blur_map_raw(raw, cfg).descriptors;
        RefineParams p;
        p.min_weight = 1.0;
        p.max_weight = 0.0;
        const BlurMap out = refine_map(raw, df, p);
        for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 8; ++x) {
                const double expect =
                    refine_window_oracle(raw, df, y, x, p.min_window, p.filter_strength);
                CHECK(out.at(y, x) == doctest::Approx(expect).epsilon(1e-9));
            }
        }
    }

    SUBCASE("identical descriptors reduce to box means") {
        const BlurMap raw = testutil::random_image(8, 8, 77);
        const DescriptorField df = constant_descriptors(8, 8, 4);
        RefineParams p;
        const BlurMap out = refine_map(raw, df, p);
        for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 8; ++x) {
                // All weights equal: plain averages of the two windows.
                double m5 = 0.0, m11 = 0.0;
                for (int dy = -2; dy <= 2; ++dy)
                    for (int dx = -2; dx <= 2; ++dx)
                        m5 += raw.at(testutil::mirror(y + dy, 8), testutil::mirror(x + dx, 8));
                for (int dy = -5; dy <= 5; ++dy)
                    for (int dx = -5; dx <= 5; ++dx)
                        m11 += raw.at(testutil::mirror(y + dy, 8), testutil::mirror(x + dx, 8));
                const double expect = 0.5 * (m5 / 25.0) + 0.5 * (m11 / 121.0);
                CHECK(out.at(y, x) == doctest::Approx(expect).epsilon(1e-9));
            }
        }
    }

    SUBCASE("output stays within the raw range") {
        const BlurMap raw = testutil::random_image(10, 10, 4);
        BlurMapConfig cfg;
        const DescriptorField df = blur_map_raw(raw, cfg).descriptors;
        const BlurMap out = refine_map(raw, df, RefineParams{});
        const ImageStats in = stats(raw);
        for (double v : out.raw()) {
            CHECK(v >= in.low - 1e-12);
            CHECK(v <= in.high + 1e-12);
        }
    }

    SUBCASE("invalid windows rejected") {
        RefineParams p;
        p.min_window = 4;
        CHECK_THROWS_AS(refine_map(BlurMap(4, 4, 0.5), constant_descriptors(4, 4, 2), p),
                        std::invalid_argument);
        p.min_window = 13;
        p.max_window = 11;
        CHECK_THROWS_AS(refine_map(BlurMap(4, 4, 0.5), constant_descriptors(4, 4, 2), p),
                        std::invalid_argument);
    }
}

TEST_CASE("double_threshold") {
    BlurMap m(1, 3, 0.0);
    m.at(0, 0) = 0.8;
    m.at(0, 1) = 0.1;
    m.at(0, 2) = 0.5;
    const BlurMap out = double_threshold(m, 0.7, 0.3);
    CHECK(out.at(0, 0) == 0.8);  // confident sharp kept
    CHECK(out.at(0, 1) == 0.1);  // confident blur kept
    CHECK(out.at(0, 2) == 0.0);  // uncertain middle zeroed

    SUBCASE("idempotent") {
        const BlurMap twice = double_threshold(out, 0.7, 0.3);
        for (std::size_t i = 0; i < out.pixel_count(); ++i) {
            CHECK(twice.raw()[i] == out.raw()[i]);
        }
    }

    SUBCASE("inverted thresholds rejected") {
        CHECK_THROWS_AS(double_threshold(m, 0.3, 0.7), std::invalid_argument);
    }
}

TEST_CASE("blur_map") {
    SUBCASE("blurring an image lowers the mean map value") {
        const GrayImage sharp = testutil::random_image(32, 32, 9);
        const GrayImage blurred = convolve(sharp, gaussian_kernel(4.0));
        BlurMapConfig cfg;
        cfg.refine = false;
        cfg.threshold = false;
        const double mean_sharp = stats(blur_map(sharp, cfg)).avg;
        const double mean_blurred = stats(blur_map(blurred, cfg)).avg;
        CHECK(mean_blurred < mean_sharp);
    }

    SUBCASE("constant image gives a spatially constant map") {
        BlurMapConfig cfg;
        const BlurMap map = blur_map(GrayImage(16, 16, 0.5), cfg);
        const double first = map.raw()[0];
        for (double v : map.raw()) CHECK(v == doctest::Approx(first).epsilon(1e-12));
    }

    SUBCASE("half-plane composite separates by at least 0.05") {
        const GrayImage tex = testutil::random_image(32, 32, 15);
        const GrayImage blurred = convolve(tex, gaussian_kernel(4.0));
        GrayImage img = blurred;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 16; ++x) img.at(y, x) = tex.at(y, x);
        BlurMapConfig cfg;
        const BlurMap map = blur_map(img, cfg);
        double left = 0.0, right = 0.0;
        for (int y = 0; y < 32; ++y) {
            for (int x = 0; x < 16; ++x) left += map.at(y, x);
            for (int x = 16; x < 32; ++x) right += map.at(y, x);
        }
        CHECK(left / 512.0 - right / 512.0 >= 0.05);
    }

    SUBCASE("tiny images are rejected") {
        BlurMapConfig cfg;
        CHECK_THROWS_AS(blur_map(GrayImage(4, 4, 0.5), cfg), std::invalid_argument);
    }
}

TEST_CASE("blur monotonicity of the band statistics") {
    // One pinned high-variance texture; the banded ratio against the sharp
    // reference vector must fall strictly with the degradation sigma.
    const GrayImage tex = testutil::random_image(64, 64, 1);
    const auto center_patch = [](const GrayImage& img) {
        GrayImage p(32, 32);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) p.at(y, x) = img.at(y + 16, x + 16);
        return p;
    };
    const std::vector<double> reference = freq_average(dct2(center_patch(tex)));
    const DcrParams params = DcrParams{}.resolved(63);

    double prev = std::numeric_limits<double>::infinity();
    for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
        const GrayImage degraded = convolve(tex, gaussian_kernel(sigma));
        const std::vector<double> c = freq_average(dct2(center_patch(degraded)));
        const double m = map_dcr(dcr(sharpness_ratio(c, reference), params), params);
        CHECK(m < prev);
        prev = m;
    }
}
