#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "ssm/checkpoint.hpp"
#include "ssm/config.hpp"
#include "ssm/dataset.hpp"
#include "ssm/errors.hpp"
#include "ssm/rng.hpp"
#include "ssm/ssm.hpp"

using namespace ssm;

namespace {

const char* kDir = "io_test_tmp";

std::string temp_path(const char* name) {
    std::filesystem::create_directories(kDir);
    return (std::filesystem::path(kDir) / name).string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

template <typename Fn>
std::string error_message(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("dataset CSV round-trips exactly") {
    Dataset ds;
    ds.examples = Matrix::from_rows({{0.0, 1.0, 0.5},
                                     {1.0 / 3.0, 0.1, 1.0 - 0x1.0p-53},
                                     {0.123456789012345678, 0.25, 0.75}});
    ds.labels = {0, 7, 1};

    const std::string labeled = temp_path("roundtrip_labeled.csv");
    save_dataset_csv(labeled, ds);
    const Dataset back = load_dataset_csv(labeled);
    CHECK(back.examples == ds.examples);
    CHECK(back.labels == ds.labels);

    ds.labels.clear();
    const std::string plain = temp_path("roundtrip_plain.csv");
    save_dataset_csv(plain, ds);
    const Dataset unlabeled = load_dataset_csv(plain);
    CHECK(unlabeled.examples == ds.examples);
    CHECK_FALSE(unlabeled.has_labels());

    const std::string header = read_file(plain);
    CHECK(header.rfind("v0,v1,v2\n", 0) == 0);
}

TEST_CASE("dataset loader pinpoints malformed rows") {
    const std::string path = temp_path("bad.csv");

    write_file(path, "v0,v1\n0.5,1.5\n");
    std::string msg = error_message([&] { load_dataset_csv(path); });
    CHECK(msg.find("row 0, col 1") != std::string::npos);
    CHECK(msg.find("outside [0,1]") != std::string::npos);

    write_file(path, "v0,v1\n0.5,0.5\nabc,0.5\n");
    msg = error_message([&] { load_dataset_csv(path); });
    CHECK(msg.find("row 1, col 0") != std::string::npos);

    write_file(path, "v0,v1\n0.5\n");
    msg = error_message([&] { load_dataset_csv(path); });
    CHECK(msg.find("row 0 has 1 fields, expected 2") != std::string::npos);

    write_file(path, "x0,v1\n0.5,0.5\n");
    CHECK_THROWS_AS(load_dataset_csv(path), ValidationError);

    write_file(path, "v0,label\n0.5,1.5\n");
    msg = error_message([&] { load_dataset_csv(path); });
    CHECK(msg.find("label must be a non-negative integer") != std::string::npos);

    write_file(path, "v0,label\n0.5,-1\n");
    CHECK_THROWS_AS(load_dataset_csv(path), ValidationError);

    write_file(path, "");
    CHECK_THROWS_AS(load_dataset_csv(path), ValidationError);

    write_file(path, "label\n");
    CHECK_THROWS_AS(load_dataset_csv(path), ValidationError);

    CHECK_THROWS_AS(load_dataset_csv(temp_path("definitely_missing.csv")), IoError);
    CHECK_THROWS_AS(save_dataset_csv((std::filesystem::path(kDir) / "nope" / "x.csv").string(),
                                     Dataset{}),
                    IoError);

    write_file(path, "v0,v1\n");
    const Dataset empty = load_dataset_csv(path);
    CHECK(empty.examples.rows() == 0);
    CHECK(empty.examples.cols() == 2);

    write_file(path, "v0,v1\r\n0.25,0.75\r\n\r\n");
    const Dataset crlf = load_dataset_csv(path);
    CHECK(crlf.examples.rows() == 1);
    CHECK(crlf.examples(0, 1) == 0.75);
}

TEST_CASE("checkpoints restore the network bit for bit") {
    SsmConfig cfg;
    cfg.num_visible = 5;
    cfg.num_hidden = 4;
    cfg.num_outputs = 3;
    RngStream rng(9);
    SsmNetwork net = init_network(cfg, rng);
    net.p = 0.37;
    net.bias_hidden[2] = -0.125;
    net.bias_visible[0] = 1.0 / 3.0;

    const std::string path = temp_path("net.ckpt");
    save_checkpoint(path, net, 123);
    const LoadedCheckpoint ck = load_checkpoint(path);
    CHECK(ck.seed == 123);
    CHECK(ck.network.p == net.p);
    CHECK(ck.network.weights == net.weights);
    CHECK(ck.network.bias_hidden == net.bias_hidden);
    CHECK(ck.network.bias_visible == net.bias_visible);
    CHECK(ck.network.readout == net.readout);
}

TEST_CASE("checkpoint loader rejects damaged files") {
    SsmConfig cfg;
    cfg.num_visible = 3;
    cfg.num_hidden = 2;
    RngStream rng(11);
    const SsmNetwork net = init_network(cfg, rng);
    const std::string path = temp_path("damaged.ckpt");
    save_checkpoint(path, net, 1);
    const std::string good = read_file(path);

    write_file(path, "not a checkpoint\n" + good.substr(good.find('\n') + 1));
    CHECK_THROWS_AS(load_checkpoint(path), ValidationError);

    write_file(path, good.substr(0, good.size() / 2));
    CHECK_THROWS_AS(load_checkpoint(path), ValidationError);

    write_file(path, good.substr(0, good.find("W_out")));
    CHECK_THROWS_AS(load_checkpoint(path), ValidationError);

    CHECK_THROWS_AS(load_checkpoint(temp_path("missing.ckpt")), IoError);

    SsmNetwork broken = net;
    broken.bias_hidden.push_back(0.0);
    CHECK_THROWS_AS(save_checkpoint(temp_path("never.ckpt"), broken, 1), ValidationError);
}

TEST_CASE("empty config text yields the documented defaults") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.ssm.num_visible == 16);
    CHECK(cfg.ssm.num_hidden == 8);
    CHECK(cfg.ssm.num_outputs == 2);
    CHECK(cfg.ssm.p == 0.5);
    CHECK(cfg.ssm.learn_rate == 0.05);
    CHECK(cfg.ssm.num_epochs == 200);
    CHECK(cfg.ssm.seed == 1);
    CHECK(cfg.rng_source == "ideal");
    CHECK(cfg.csr_n == 10);
    CHECK(cfg.csr_k == -1);
    CHECK(cfg.clock_period_ns == 25.0);
    CHECK(cfg.setup_margin_ns == 5.0);
    CHECK(cfg.cu_variant == "cmos");
    CHECK(cfg.n_cu == 0);
    CHECK(cfg.diff_pair_multiplier == 2);
    CHECK(cfg.dff_per_cu == 10);
    CHECK(cfg.quant_levels == 0);
    CHECK(cfg.gen_kind == "bars-stripes");
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.effective_csr_k() == 5);
    CHECK(cfg.effective_n_cu() == 15);
    CHECK(cfg.realized_p() == 0.5);
}

TEST_CASE("config parsing covers every key and flags the rest") {
    const char* text =
        "# comment line\n"
        "num_visible = 9\n"
        "num_hidden=4\n"
        "p=0.33\n"
        "rng_source=csr\n"
        "csr_n=10\n"
        "ticks_per_sample=2\n"
        "mask_refresh=per-example\n"
        "update_biases=true\n"
        "quant_levels=8\n"
        "cu_variant=memristive\n"
        "dataset=some/file.csv\n"
        "\n"
        "gen_sigma=0.2\n";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.ssm.num_visible == 9);
    CHECK(cfg.ssm.num_hidden == 4);
    CHECK(cfg.ssm.p == 0.33);
    CHECK(cfg.rng_source == "csr");
    CHECK(cfg.ticks_per_sample == 2);
    CHECK(cfg.ssm.mask_refresh == MaskRefresh::per_example);
    CHECK(cfg.ssm.update_biases);
    CHECK(cfg.quant_levels == 8);
    CHECK(cfg.cu_variant == "memristive");
    CHECK(cfg.dataset == "some/file.csv");
    CHECK(cfg.gen_sigma == 0.2);
    CHECK(cfg.realized_p() == 0.3);
    CHECK(cfg.effective_csr_k() == 3);

    CHECK_THROWS_AS(parse_config("bogus=1\n"), ValidationError);
    const std::string msg = error_message([] { parse_config("bogus=1\n"); });
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK_THROWS_AS(parse_config("p=abc\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("update_biases=maybe\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("num_epochs=-3\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("just a line\n"), ValidationError);

    RunConfig base;
    apply_config_override(base, "num_hidden=32");
    CHECK(base.ssm.num_hidden == 32);
    CHECK_THROWS_AS(apply_config_override(base, "num_hidden"), ValidationError);

    RunConfig bad;
    bad.rng_source = "thermal";
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = RunConfig{};
    bad.csr_k = 11;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = RunConfig{};
    bad.gen_kind = "spirals";
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    CHECK_THROWS_AS(load_config(temp_path("no_such_config.txt")), IoError);
}

TEST_CASE("resolved config echoes re-parse to the same text") {
    RunConfig cfg;
    cfg.rng_source = "csr";
    cfg.ssm.p = 0.33;
    cfg.dataset = "data/train.csv";
    const std::string echo1 = resolved_text(cfg);
    CHECK(echo1.find("p_realized=0.29999999999999999\n") != std::string::npos);
    CHECK(echo1.find("csr_k=3\n") != std::string::npos);
    CHECK(echo1.find("n_cu=15\n") != std::string::npos);

    const RunConfig reparsed = parse_config(echo1);
    CHECK(resolved_text(reparsed) == echo1);
    CHECK(reparsed.realized_p() == 0.3);
}

TEST_CASE("bars and stripes enumerate every pattern") {
    const Dataset ds = make_bars_stripes(4, 4);
    REQUIRE(ds.examples.rows() == 32);
    REQUIRE(ds.examples.cols() == 16);
    REQUIRE(ds.labels.size() == 32);
    for (std::size_t r = 0; r < 32; ++r) CHECK(ds.labels[r] == (r < 16 ? 0 : 1));
    for (double v : ds.examples.values()) CHECK((v == 0.0 || v == 1.0));

    // Bar images: each image row is constant and equals a bit of the index.
    for (std::size_t b = 0; b < 16; ++b)
        for (std::size_t i = 0; i < 4; ++i) {
            const double expect = (b >> i) & 1u ? 1.0 : 0.0;
            for (std::size_t j = 0; j < 4; ++j) CHECK(ds.examples(b, i * 4 + j) == expect);
        }
    // Stripe images: each image column is constant.
    for (std::size_t s = 0; s < 16; ++s)
        for (std::size_t j = 0; j < 4; ++j) {
            const double expect = (s >> j) & 1u ? 1.0 : 0.0;
            for (std::size_t i = 0; i < 4; ++i) CHECK(ds.examples(16 + s, i * 4 + j) == expect);
        }

    const Dataset tiny = make_bars_stripes(1, 2);
    CHECK(tiny.examples.rows() == 2 + 4);
    CHECK(tiny.examples.cols() == 2);

    CHECK_THROWS_AS(make_bars_stripes(0, 4), ValidationError);
    CHECK_THROWS_AS(make_bars_stripes(4, 17), ValidationError);
}

TEST_CASE("gaussian blobs are reproducible and well separated") {
    const Dataset a = make_blobs(50, 8, 4.0, 0.1, 42);
    const Dataset b = make_blobs(50, 8, 4.0, 0.1, 42);
    const Dataset c = make_blobs(50, 8, 4.0, 0.1, 43);
    REQUIRE(a.examples.rows() == 100);
    REQUIRE(a.examples.cols() == 8);
    CHECK(a.examples == b.examples);
    CHECK(a.examples != c.examples);

    for (std::size_t r = 0; r < 100; ++r) CHECK(a.labels[r] == (r < 50 ? 0 : 1));
    for (double v : a.examples.values()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    double mean0 = 0.0, mean1 = 0.0;
    for (std::size_t r = 0; r < 50; ++r)
        for (std::size_t d = 0; d < 8; ++d) {
            mean0 += a.examples(r, d);
            mean1 += a.examples(r + 50, d);
        }
    mean0 /= 400.0;
    mean1 /= 400.0;
    CHECK(mean0 == doctest::Approx(0.3).epsilon(0.07));
    CHECK(mean1 == doctest::Approx(0.7).epsilon(0.03));

    CHECK_THROWS_AS(make_blobs(0, 8, 4.0, 0.1, 1), ValidationError);
    CHECK_THROWS_AS(make_blobs(10, 0, 4.0, 0.1, 1), ValidationError);
    CHECK_THROWS_AS(make_blobs(10, 8, 4.0, 0.0, 1), ValidationError);
    CHECK_THROWS_AS(make_blobs(10, 8, -1.0, 0.1, 1), ValidationError);
}
