#include "esnrae/dataio.hpp"
#include "esnrae/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace esnrae;

namespace {

// Dataset of `p` patterns, each a unit-power random sequence of length `k`.
Dataset unit_power_dataset(std::size_t p, std::size_t k, std::uint64_t seed) {
    Dataset d = test::random_dataset(p, k, seed);
    for (std::size_t i = 0; i < p; ++i) {
        auto r = d.patterns.row(i);
        double power = 0.0;
        for (double v : r) power += v * v;
        power /= static_cast<double>(k);
        for (double& v : r) v /= std::sqrt(power);
    }
    return d;
}

double noise_variance(const Dataset& clean, const Dataset& noisy) {
    double sum = 0.0;
    const auto a = clean.patterns.data();
    const auto b = noisy.patterns.data();
    for (std::size_t i = 0; i < a.size(); ++i) sum += (b[i] - a[i]) * (b[i] - a[i]);
    return sum / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("parse_ucr accepts commas, tabs and whitespace") {
    const Dataset a = parse_ucr_text("1,0.5,1.5\n2,2.5,3.5\n", "a");
    const Dataset b = parse_ucr_text("1\t0.5\t1.5\n2\t2.5\t3.5\n", "b");
    const Dataset c = parse_ucr_text("  1   0.5  1.5\n2 2.5 3.5  \n\n", "c");
    for (const Dataset* d : {&a, &b, &c}) {
        CHECK(d->size() == 2);
        CHECK(d->length() == 2);
        CHECK(d->patterns == Matrix{{0.5, 1.5}, {2.5, 3.5}});
        CHECK(d->labels == std::vector<int>{0, 1});
        CHECK(d->label_map == std::vector<long long>{1, 2});
    }
}

TEST_CASE("parse_ucr reads real-valued labels and remaps them in ascending order") {
    const Dataset d = parse_ucr_text(
        "  2.0000000e+00  1.0  2.0\n -1.0000000e+00  3.0  4.0\n  2.0000000e+00  5.0  6.0\n", "r");
    CHECK(d.label_map == std::vector<long long>{-1, 2});
    CHECK(d.labels == std::vector<int>{1, 0, 1});
}

TEST_CASE("parse_ucr single pattern") {
    const Dataset d = parse_ucr_text("1, 0.0, 0.0", "one");
    CHECK(d.size() == 1);
    CHECK(d.length() == 2);
    CHECK(d.num_classes() == 1);
}

TEST_CASE("parse_ucr rejects malformed documents") {
    CHECK_THROWS_AS((void)parse_ucr_text("1,0.5,1.5\n2,2.5\n", "ragged"), FormatError);
    CHECK_THROWS_AS((void)parse_ucr_text("1,0.5,abc\n", "text"), FormatError);
    CHECK_THROWS_AS((void)parse_ucr_text("", "empty"), FormatError);
    CHECK_THROWS_AS((void)parse_ucr_text("\n\n", "blank"), FormatError);
    CHECK_THROWS_AS((void)parse_ucr_text("1.5,0.5\n", "fractional label"), FormatError);
    CHECK_THROWS_AS((void)parse_ucr_text("1\n", "no values"), FormatError);
}

TEST_CASE("parse_ucr with a fixed label map") {
    const std::vector<long long> map{1, 2};
    const Dataset d = parse_ucr_text("2,0.0\n1,1.0\n", "t", Split::test, &map);
    CHECK(d.labels == std::vector<int>{1, 0});
    CHECK(d.split == Split::test);
    CHECK_THROWS_AS((void)parse_ucr_text("3,0.0\n", "t", Split::test, &map), FormatError);
}

TEST_CASE("parse_ucr names a missing file") {
    const std::filesystem::path missing = "/nonexistent/dir/Missing_TRAIN.txt";
    try {
        (void)parse_ucr(missing);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
    }
}

TEST_CASE("serialize_ucr round-trips bit-exactly") {
    Dataset d = test::random_dataset(17, 33, 5);
    d.label_map = {-3, 7};
    d.patterns(0, 0) = 1e-300;
    d.patterns(1, 1) = -0.1;
    const Dataset back = parse_ucr_text(serialize_ucr(d), "back");
    CHECK(back.patterns == d.patterns);
    CHECK(back.labels == d.labels);
    CHECK(back.label_map == d.label_map);

    const auto path = std::filesystem::temp_directory_path() / "esnrae_dataio_roundtrip.txt";
    write_ucr(d, path);
    const Dataset from_file = parse_ucr(path);
    CHECK(from_file.patterns == d.patterns);
    std::filesystem::remove(path);
}

TEST_CASE("normalize uses the statistics of the reference split") {
    const Dataset train = test::random_dataset(40, 12, 11);
    Dataset shifted = test::random_dataset(30, 12, 12, Split::test);
    for (double& v : shifted.patterns.data()) v += 3.0;

    const Dataset n = normalize(train, train);
    for (std::size_t j = 0; j < n.length(); ++j) {
        double mean = 0.0;
        double sq = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i) mean += n.patterns(i, j);
        mean /= static_cast<double>(n.size());
        for (std::size_t i = 0; i < n.size(); ++i) {
            sq += (n.patterns(i, j) - mean) * (n.patterns(i, j) - mean);
        }
        CHECK(std::abs(mean) < 1e-12);
        CHECK(std::abs(std::sqrt(sq / static_cast<double>(n.size())) - 1.0) < 1e-9);
    }

    const Dataset t = normalize(shifted, train);
    double mean = 0.0;
    for (double v : t.patterns.data()) mean += v;
    mean /= static_cast<double>(t.patterns.size());
    CHECK(mean > 1.0);
}

TEST_CASE("normalize passes constant features through") {
    Dataset d = test::random_dataset(10, 3, 2);
    for (std::size_t i = 0; i < d.size(); ++i) d.patterns(i, 1) = 4.25;
    const Dataset n = normalize(d, d);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(n.patterns(i, 1) == 4.25);
}

TEST_CASE("scale_patterns multiplies every value") {
    const Dataset d = test::random_dataset(4, 5, 3);
    const Dataset s = scale_patterns(d, 0.5);
    for (std::size_t i = 0; i < d.patterns.size(); ++i) {
        CHECK(s.patterns.data()[i] == d.patterns.data()[i] * 0.5);
    }
    CHECK(s.labels == d.labels);
}

TEST_CASE("inject_noise at or above the noise-free level is a no-op") {
    const Dataset d = test::random_dataset(5, 8, 4);
    CHECK(inject_noise(d, {.snr_db = kNoiseFreeSnrDb, .seed = 1}).patterns == d.patterns);
    CHECK(inject_noise(d, {.snr_db = 1e9, .seed = 1}).patterns == d.patterns);
    CHECK(std::isinf(measured_snr(d, d)));
}

TEST_CASE("inject_noise variance follows the SNR definition") {
    const Dataset d = unit_power_dataset(200, 250, 9);
    SUBCASE("0 dB gives unit variance") {
        const double var = noise_variance(d, inject_noise(d, {.snr_db = 0.0, .seed = 3}));
        CHECK(std::abs(var - 1.0) < 0.02);
    }
    SUBCASE("measured SNR round-trips") {
        for (double snr : {50.0, 10.0, 1.0, 0.5}) {
            const Dataset noisy = inject_noise(d, {.snr_db = snr, .seed = 7});
            CHECK(std::abs(measured_snr(d, noisy) - snr) <= 0.5);
            CHECK(noisy.labels == d.labels);
        }
    }
}

TEST_CASE("inject_noise per-level bands on a single long pattern") {
    const Dataset d = unit_power_dataset(1, 100, 21);
    const double m10 = measured_snr(d, inject_noise(d, {.snr_db = 10.0, .seed = 1}));
    CHECK(m10 >= 9.0);
    CHECK(m10 <= 11.0);
}

TEST_CASE("inject_noise power is monotone in SNR for a fixed seed") {
    const Dataset d = unit_power_dataset(20, 64, 8);
    double prev = 0.0;
    for (double snr : {50.0, 10.0, 1.0, 0.5, 0.0}) {
        const double var = noise_variance(d, inject_noise(d, {.snr_db = snr, .seed = 5}));
        CHECK(var > prev);
        prev = var;
    }
}

TEST_CASE("inject_noise is deterministic and split dependent") {
    const Dataset d = unit_power_dataset(6, 30, 2);
    Dataset t = d;
    t.split = Split::test;
    const NoiseSpec spec{.snr_db = 10.0, .seed = 42};
    CHECK(inject_noise(d, spec).patterns == inject_noise(d, spec).patterns);
    CHECK(inject_noise(d, spec).patterns != inject_noise(t, spec).patterns);
    CHECK(inject_noise(d, spec).patterns !=
          inject_noise(d, {.snr_db = 10.0, .seed = 43}).patterns);
}

TEST_CASE("inject_noise leaves all-zero patterns unchanged") {
    Dataset d = unit_power_dataset(3, 10, 2);
    for (double& v : d.patterns.row(1)) v = 0.0;
    const Dataset noisy = inject_noise(d, {.snr_db = 0.5, .seed = 1});
    for (double v : noisy.patterns.row(1)) CHECK(v == 0.0);
}

TEST_CASE("NoiseSpec targets") {
    CHECK(NoiseSpec{.targets = NoiseTargets::both}.applies_to(Split::train));
    CHECK(NoiseSpec{.targets = NoiseTargets::test}.applies_to(Split::test));
    CHECK_FALSE(NoiseSpec{.targets = NoiseTargets::test}.applies_to(Split::train));
    CHECK_FALSE(NoiseSpec{.targets = NoiseTargets::train}.applies_to(Split::test));
}

TEST_CASE("make_synthetic is balanced and deterministic") {
    const SynthSpec spec{.length = 48, .train_size = 30, .test_size = 20, .seed = 4};
    const auto [train, test] = make_synthetic(spec);
    CHECK(train.size() == 30);
    CHECK(test.size() == 20);
    CHECK(train.length() == 48);
    CHECK(std::count(train.labels.begin(), train.labels.end(), 0) == 15);
    CHECK(std::count(test.labels.begin(), test.labels.end(), 1) == 10);
    CHECK(test.split == Split::test);
    CHECK(make_synthetic(spec).first.patterns == train.patterns);
    CHECK(train.patterns != test.patterns);
}
